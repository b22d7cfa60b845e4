"""Acceptance suite: one printed PASS/FAIL line per criterion.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines and
the reported measured constants.
"""

import math
import random
from itertools import product

import numpy as np
import pytest

from plrelu.decomposition import decompose, eval_decomposition, prune
from plrelu.geometry import AffineFunctional
from plrelu.mesh import eval_mesh, generate_random, stratified_samples, validate
from plrelu.network import (
    compile_decomposition,
    compile_mesh,
    compile_simplex,
    forward_batch,
    stats,
)
from plrelu.rational import Rat
from plrelu.simplex import MaxMinForm, max_functionals, maxmin_form, tau_eval

from conftest import random_lifted_simplex, shadow_samples

MESH_COUNT = 200
SWEEP = list(product((1, 2, 3), (2, 5, 10, 20)))


def report(criterion: int, passed: bool, detail: str):
    print(f"CRITERION {criterion}: {'PASS' if passed else 'FAIL'} - {detail}")
    assert passed, f"criterion {criterion}: {detail}"


@pytest.fixture(scope="session")
def mesh_corpus():
    """One pass over the 200-mesh corpus, gathering everything the
    decomposition and fidelity criteria need."""
    results = {
        "meshes": 0,
        "invalid": 0,
        "exact_points": 0,
        "exact_mismatches": 0,
        "bad_term_counts": 0,
        "bad_pruned_counts": 0,
        "float_points": 0,
        "max_float_err": 0.0,
    }
    for i in range(MESH_COUNT):
        d = 1 + i % 3
        n_target = 1 + (i * 7) % 20
        mesh = generate_random(d, n_target, seed=1000 + i)
        if not validate(mesh).valid:
            results["invalid"] += 1
            continue
        results["meshes"] += 1
        n = mesh.n_simplices

        dec = decompose(mesh, seed=i)
        if len(dec.terms) != 2 * n:
            results["bad_term_counts"] += 1
        if len(prune(dec).terms) > 2 * n:
            results["bad_pruned_counts"] += 1

        points = stratified_samples(mesh, 1000, random.Random(f"acc-{i}"))
        exact = [eval_mesh(mesh, x) for x in points]
        for x, want in zip(points[:100], exact[:100]):
            results["exact_points"] += 1
            if eval_decomposition(dec, x) != want:
                results["exact_mismatches"] += 1

        net = compile_decomposition(dec)
        xs = np.array([[float(c) for c in x] for x in points])
        err = np.max(np.abs(forward_batch(net, xs)
                            - np.array([float(v) for v in exact])))
        results["float_points"] += len(points)
        results["max_float_err"] = max(results["max_float_err"], float(err))
    return results


@pytest.fixture(scope="session")
def simplex_corpus():
    """1000 random nondegenerate lifted simplices per d with 50 points
    each, comparing the clipping and max-min evaluators exactly."""
    results = {}
    for d in (1, 2, 3):
        rng = random.Random(f"acc3-{d}")
        mismatches = 0
        max_count = 0
        for _ in range(1000):
            delta = random_lifted_simplex(rng, d, span=32)
            form = maxmin_form(delta)
            max_count = max(max_count, len(form.functionals))
            for x in shadow_samples(rng, delta, 50):
                if form(x) != tau_eval(delta, x):
                    mismatches += 1
        results[d] = {"mismatches": mismatches, "max_functionals": max_count}
    return results


@pytest.fixture(scope="session")
def sweep_networks():
    """20 compiled networks per (d, n) in the sweep, with stats."""
    results = {}
    for d, n in SWEEP:
        entries = []
        for k in range(20):
            mesh = generate_random(d, n, seed=5000 + 100 * d + 7 * n + k)
            net = compile_mesh(mesh, seed=k, n_slots=n)
            entries.append({
                "shape": net.shape_signature(),
                "stats": stats(net, d, n),
            })
        results[(d, n)] = entries
    return results


def test_criterion_1_exact_decomposition_identity(mesh_corpus):
    r = mesh_corpus
    detail = (
        f"{r['meshes']} meshes, {r['exact_points']} exact comparisons, "
        f"{r['exact_mismatches']} mismatches, {r['invalid']} invalid meshes"
    )
    report(1, r["meshes"] == MESH_COUNT and r["exact_mismatches"] == 0
           and r["invalid"] == 0, detail)


def test_criterion_2_term_count_bound(mesh_corpus):
    r = mesh_corpus
    detail = (
        f"{r['bad_term_counts']} decompositions off 2n pre-pruning, "
        f"{r['bad_pruned_counts']} above 2n post-pruning"
    )
    report(2, r["bad_term_counts"] == 0 and r["bad_pruned_counts"] == 0, detail)


def test_criterion_3_maxmin_oracle_equivalence(simplex_corpus):
    mismatches = sum(r["mismatches"] for r in simplex_corpus.values())
    detail = (
        f"3000 simplices x 50 points, {mismatches} exact disagreements "
        f"between clipping and max-min evaluation"
    )
    report(3, mismatches == 0, detail)


def test_criterion_4_functional_count_bound(simplex_corpus):
    observed = {d: r["max_functionals"] for d, r in simplex_corpus.items()}
    bounds = {d: max_functionals(d) for d in observed}
    detail = f"observed maxima {observed}, bounds {bounds}"
    report(4, all(observed[d] <= bounds[d] for d in observed), detail)


def test_criterion_5_network_fidelity(mesh_corpus):
    r = mesh_corpus
    detail = (
        f"max |forward - eval_mesh| = {r['max_float_err']:.3e} "
        f"over {r['float_points']} samples (tol 1e-6)"
    )
    report(5, r["float_points"] >= 1000 * MESH_COUNT
           and r["max_float_err"] <= 1e-6, detail)


def test_criterion_6_depth_bounds(sweep_networks):
    rng = random.Random("acc6")
    simplex_ok = True
    c0_values = []
    for d in range(1, 9):
        m = max_functionals(d)
        functionals = tuple(
            AffineFunctional(
                tuple(Rat(rng.randint(-8, 8), rng.randint(1, 3))
                      for _ in range(d)),
                Rat(rng.randint(1, 9)),
            )
            for _ in range(m)
        )
        net = compile_simplex(MaxMinForm(functionals, (Rat(0),) * d, Rat(1)))
        depth = stats(net, d, 1).depth
        bound = (2 * math.ceil(math.log2(d)) if d > 1 else 0) + 3
        if depth > bound:
            simplex_ok = False
    full_ok = True
    for (d, n), entries in sweep_networks.items():
        for e in entries:
            bound = (2 * math.ceil(math.log2(d)) if d > 1 else 0) + 4
            c0_values.append(e["stats"].c0)
            if e["stats"].depth > bound:
                full_ok = False
    detail = (
        f"per-simplex depth <= 2*ceil(log2 d)+3 for d=1..8: {simplex_ok}; "
        f"full-network depth <= 2*ceil(log2 d)+4: {full_ok}; "
        f"measured C0 max = {max(c0_values)}"
    )
    report(6, simplex_ok and full_ok, detail)


def test_criterion_7_width_size_scaling(sweep_networks):
    c1_max = max(e["stats"].c1 for entries in sweep_networks.values()
                 for e in entries)
    c2_max = max(e["stats"].c2 for entries in sweep_networks.values()
                 for e in entries)
    linear = True
    for d in (1, 2, 3):
        for n_small, n_big in ((5, 10), (10, 20)):
            small = sweep_networks[(d, n_small)][0]["stats"]
            big = sweep_networks[(d, n_big)][0]["stats"]
            if big.width > 2 * small.width or big.size > 2 * small.size:
                linear = False
    detail = (
        f"C1 max = {c1_max} (bound 12), C2 max = {c2_max} (bound 22), "
        f"doubling n at most doubles width/size: {linear}"
    )
    report(7, c1_max <= 12 and c2_max <= 22 and linear, detail)


def test_criterion_8_fixed_architecture_universality(sweep_networks):
    bad = [
        (d, n) for (d, n), entries in sweep_networks.items()
        if len({e["shape"] for e in entries}) != 1
    ]
    detail = (
        f"20 meshes per (d, n) over {len(SWEEP)} sweep points; "
        f"non-uniform shapes at {bad or 'none'}"
    )
    report(8, not bad, detail)
