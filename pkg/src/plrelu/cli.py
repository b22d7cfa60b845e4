"""Command-line surface for the PL-to-ReLU pipeline.

Exit codes: 0 success / verification pass, 1 domain failure (invalid
mesh, genericity or verification failure), 2 I/O or parse failure.
"""

import argparse
import json
import random
import sys
from dataclasses import dataclass

import numpy as np

from . import decomposition as dc
from . import mesh as ms
from . import network as nw
from .geometry import GeneralPositionError
from .rational import parse_scalar, scalar_str

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_IO = 2


@dataclass(frozen=True)
class VerifyReport:
    samples: int
    max_abs_error: float
    exact_mismatches: int
    term_count: int
    depth: int
    width: int
    size: int
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.exact_mismatches == 0 and self.max_abs_error <= self.tolerance

    def __str__(self) -> str:
        lines = [
            f"samples:          {self.samples}",
            f"exact mismatches: {self.exact_mismatches}",
            f"max abs error:    {self.max_abs_error:.3e} (tol {self.tolerance:g})",
            f"terms:            {self.term_count}",
            f"network:          depth={self.depth} width={self.width} size={self.size}",
            f"result:           {'PASS' if self.passed else 'FAIL'}",
        ]
        return "\n".join(lines)


def _load_json(path):
    with open(path) as fh:
        return json.load(fh)


def _parse_point_arg(text: str):
    return tuple(parse_scalar(c.strip()) for c in text.split(","))


def cmd_validate(args) -> int:
    mesh = ms.load_mesh(args.mesh)
    report = ms.validate(mesh)
    print(report)
    return EXIT_OK if report.valid else EXIT_DOMAIN


def cmd_decompose(args) -> int:
    mesh = ms.load_mesh(args.mesh)
    report = ms.validate(mesh)
    if not report.valid:
        print(report, file=sys.stderr)
        return EXIT_DOMAIN
    cone_point = _parse_point_arg(args.cone_point) if args.cone_point else None
    try:
        dec = dc.decompose(mesh, cone_point=cone_point, seed=args.seed)
    except dc.GenericityError as exc:
        print(f"genericity failure: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    if args.prune:
        dec = dc.prune(dec)
    dc.save_decomposition(dec, args.out)
    print(f"wrote {len(dec.terms)} terms to {args.out}")
    return EXIT_OK


def cmd_compile(args) -> int:
    mesh = ms.load_mesh(args.mesh)
    report = ms.validate(mesh)
    if not report.valid:
        print(report, file=sys.stderr)
        return EXIT_DOMAIN
    try:
        net = nw.compile_mesh(mesh, seed=args.seed)
    except dc.GenericityError as exc:
        print(f"genericity failure: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    nw.save_network(net, args.out)
    st = nw.stats(net, mesh.dim, mesh.n_simplices)
    print(f"wrote network to {args.out} ({st})")
    return EXIT_OK


def cmd_eval(args) -> int:
    data = _load_json(args.artifact)
    x = _parse_point_arg(args.point)
    if "simplices" in data:
        value = ms.eval_mesh(ms.mesh_from_dict(data), x)
        print(scalar_str(value))
    elif "terms" in data:
        value = dc.eval_decomposition(dc.decomposition_from_dict(data), x)
        print(scalar_str(value))
    elif "layers" in data:
        net = nw.network_from_dict(data)
        print(repr(nw.forward(net, [float(c) for c in x])))
    else:
        raise ValueError("unrecognized artifact (no simplices/terms/layers key)")
    return EXIT_OK


def run_verify(mesh, samples, tol, seed, flip_sign=None, jobs=1) -> VerifyReport:
    """Cross-check mesh vs decomposition (exact) and mesh vs network (float)."""
    dec = dc.decompose(mesh, seed=seed)
    if flip_sign is not None:
        terms = list(dec.terms)
        sign, delta = terms[flip_sign]
        terms[flip_sign] = (-sign, delta)
        dec = dc.SignedDecomposition(dec.dim, dec.cone_point, tuple(terms))
    net = nw.compile_decomposition(dec)
    points = ms.stratified_samples(mesh, samples, random.Random(f"verify-{seed}"))

    exact = [ms.eval_mesh(mesh, x) for x in points]
    if jobs > 1:
        from multiprocessing import get_context
        with get_context("fork").Pool(jobs) as pool:
            dec_vals = pool.map(
                _DecEval(dec), points, chunksize=max(1, len(points) // (4 * jobs))
            )
    else:
        dec_vals = [dc.eval_decomposition(dec, x) for x in points]
    mismatches = sum(1 for a, b in zip(exact, dec_vals) if a != b)

    xs = np.array([[float(c) for c in x] for x in points])
    net_vals = nw.forward_batch(net, xs)
    max_err = float(np.max(np.abs(net_vals - np.array([float(v) for v in exact]))))

    st = nw.stats(net, mesh.dim, max(mesh.n_simplices, 1))
    return VerifyReport(
        samples=len(points),
        max_abs_error=max_err,
        exact_mismatches=mismatches,
        term_count=len(dec.terms),
        depth=st.depth,
        width=st.width,
        size=st.size,
        tolerance=tol,
    )


class _DecEval:
    def __init__(self, dec):
        self.dec = dec

    def __call__(self, x):
        return dc.eval_decomposition(self.dec, x)


def cmd_verify(args) -> int:
    if args.samples < 1:
        print("--samples must be >= 1", file=sys.stderr)
        return EXIT_DOMAIN
    mesh = ms.load_mesh(args.mesh)
    report = ms.validate(mesh)
    if not report.valid:
        print(report, file=sys.stderr)
        return EXIT_DOMAIN
    verdict = run_verify(
        mesh, args.samples, args.tol, args.seed,
        flip_sign=args.debug_flip_sign, jobs=args.jobs,
    )
    print(verdict)
    return EXIT_OK if verdict.passed else EXIT_DOMAIN


def cmd_gen(args) -> int:
    mesh = ms.generate_random(args.dim, args.n, args.seed)
    ms.save_mesh(mesh, args.out)
    print(f"wrote d={args.dim} mesh with {mesh.n_simplices} simplices to {args.out}")
    return EXIT_OK


def cmd_stats(args) -> int:
    net = nw.load_network(args.network)
    st = nw.stats(net, args.dim, args.n)
    print(st)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plrelu",
        description="Compile compactly supported PL functions into signed "
        "simplex decompositions and ReLU networks, and verify all three agree.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check mesh invariants")
    p.add_argument("mesh")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("decompose", help="emit the signed simplex decomposition")
    p.add_argument("mesh")
    p.add_argument("--out", required=True)
    p.add_argument("--cone-point", help='apex as "c1,...,c_{d+1}"')
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--prune", action="store_true")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("compile", help="emit the ReLU network")
    p.add_argument("mesh")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("eval", help="evaluate a mesh/decomposition/network file")
    p.add_argument("artifact")
    p.add_argument("point", help='point as "c1,...,c_d"')
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("verify", help="cross-check mesh, decomposition, network")
    p.add_argument("mesh")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--debug-flip-sign", type=int, default=None,
                   help="negate term I of the decomposition (testing aid)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="generate a random valid mesh")
    p.add_argument("dim", type=int)
    p.add_argument("n", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("stats", help="report depth/width/size and constants")
    p.add_argument("network")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_stats)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, GeneralPositionError) as exc:
        if isinstance(exc, (dc.GenericityError, GeneralPositionError)):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_DOMAIN
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_IO
    except IndexError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
