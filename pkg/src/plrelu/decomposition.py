"""Signed simplex-function decompositions of mesh PL functions.

The graph of f over its support, together with the support itself,
closes up into a cycle; coning that cycle to a generic apex a in
R^{d+1} triangulates the enclosed region with signs, and the signed sum
of the resulting simplex functions reproduces f exactly.
"""

import json
import random
from dataclasses import dataclass

from .geometry import GeneralPositionError, orientation
from .mesh import PLMesh
from .rational import Rat, ZERO, parse_scalar, point_str
from .simplex import LiftedSimplex, tau_eval


class GenericityError(ValueError):
    """The cone point produces a degenerate or vertical-faced simplex."""


@dataclass(frozen=True)
class SignedDecomposition:
    """f = Σ sign_i · tau(simplex_i), every simplex coned from cone_point."""

    dim: int
    cone_point: tuple
    terms: tuple

    def __post_init__(self):
        if len(self.cone_point) != self.dim + 1:
            raise ValueError("cone point must live in R^{d+1}")
        for sign, delta in self.terms:
            if sign not in (-1, 1):
                raise ValueError(f"invalid sign {sign!r}")
            if delta.dim != self.dim:
                raise ValueError("term dimension mismatch")
            if delta.vertices[0] != self.cone_point:
                raise ValueError("every term must have the cone point first")


def _cycle_faces(mesh: PLMesh):
    """Faces of the base-plus-graph cycle, as ordered vertex tuples in
    R^{d+1}.

    The cycle must bound the between-base-and-graph region positively.
    A base face whose projection is positively oriented has downward
    outward normal, giving boundary orientation sign (-1)^{d+1}; the
    graph face gets the opposite sign.  So for odd d the cycle is
    [base] - [graph] and for even d it is [graph] - [base], where the
    minus is realized by swapping the first two vertices.
    """
    base, graph = [], []
    flip_base = mesh.dim % 2 == 0
    for s in mesh.simplices:
        pts = mesh.simplex_points(s)
        flat = [tuple(p) + (ZERO,) for p in pts]
        lifted = [tuple(p) + (mesh.values[i],) for i, p in zip(s, pts)]
        flipped = flat if flip_base else lifted
        flipped[0], flipped[1] = flipped[1], flipped[0]
        base.append(tuple(flat))
        graph.append(tuple(lifted))
    return base + graph


def _cone(faces, apex):
    terms = []
    for face in faces:
        vertices = (tuple(apex),) + face
        try:
            delta = LiftedSimplex(vertices)
        except GeneralPositionError as exc:
            raise GenericityError(
                f"cone point {apex} fails genericity on face {face}: {exc}"
            ) from exc
        terms.append((orientation(vertices), delta))
    return tuple(terms)


def _candidate_cone_points(mesh: PLMesh, seed: int):
    coords = [c for v in mesh.vertices for c in v] + list(mesh.values)
    lo, hi = min(coords), max(coords)
    spread = max(hi - lo, Rat(1))
    side = int(8 * spread) + 1
    rng = random.Random(f"cone-{seed}")
    box = mesh.support_bbox()
    floor = min(ZERO, min(mesh.values))
    while True:
        point = tuple(
            Rat(rng.randint(int(blo) - side, int(bhi) + side))
            for blo, bhi in box
        ) + (floor - 1 - Rat(rng.randint(0, side)),)
        yield point


def decompose(mesh: PLMesh, cone_point=None, seed: int = 0) -> SignedDecomposition:
    """Cone the base-plus-graph cycle of the mesh to a generic apex.

    With no cone_point given, integer candidates below the mesh are
    sampled deterministically from the seed and retried until every
    coned simplex is full-dimensional with no vertical face.
    """
    faces = _cycle_faces(mesh)
    if cone_point is not None:
        apex = tuple(Rat(c) for c in cone_point)
        if len(apex) != mesh.dim + 1:
            raise ValueError("cone point must live in R^{d+1}")
        terms = _cone(faces, apex)
        return SignedDecomposition(mesh.dim, apex, terms)

    last_error = None
    candidates = _candidate_cone_points(mesh, seed)
    for _ in range(64):
        apex = next(candidates)
        try:
            terms = _cone(faces, apex)
        except GenericityError as exc:
            last_error = exc
            continue
        return SignedDecomposition(mesh.dim, apex, terms)
    raise GenericityError(
        f"no generic cone point found in 64 samples; last failure: {last_error}"
    )


def eval_decomposition(dec: SignedDecomposition, x) -> Rat:
    """Σ sign_i · tau_i(x), exact."""
    if len(x) != dec.dim:
        raise ValueError(f"point {x!r} is not in R^{dec.dim}")
    x = tuple(Rat(c) for c in x)
    return sum((sign * tau_eval(delta, x) for sign, delta in dec.terms), ZERO)


def prune(dec: SignedDecomposition) -> SignedDecomposition:
    """Cancel term pairs with the same vertex set and opposite signs.

    Such pairs arise from mesh simplices on which f is identically zero,
    whose base and graph faces cone to the same simplex with opposite
    orientations; removing them leaves the sum unchanged.
    """
    keyed = [(frozenset(d.vertices), s, d) for s, d in dec.terms]
    kept = []
    cancelled = set()
    for i, (key, sign, delta) in enumerate(keyed):
        if i in cancelled:
            continue
        partner = next(
            (j for j in range(i + 1, len(keyed))
             if j not in cancelled
             and keyed[j][0] == key and keyed[j][1] == -sign),
            None,
        )
        if partner is None:
            kept.append((sign, delta))
        else:
            cancelled.add(partner)
    return SignedDecomposition(dec.dim, dec.cone_point, tuple(kept))


def decomposition_to_dict(dec: SignedDecomposition) -> dict:
    return {
        "dim": dec.dim,
        "cone_point": point_str(dec.cone_point),
        "terms": [
            {"sign": sign, "vertices": [point_str(v) for v in delta.vertices]}
            for sign, delta in dec.terms
        ],
    }


def decomposition_from_dict(data: dict) -> SignedDecomposition:
    try:
        dim = int(data["dim"])
        cone_point = tuple(parse_scalar(c) for c in data["cone_point"])
        terms = tuple(
            (int(t["sign"]),
             LiftedSimplex(tuple(
                 tuple(parse_scalar(c) for c in v) for v in t["vertices"]
             )))
            for t in data["terms"]
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed decomposition data: {exc}") from exc
    return SignedDecomposition(dim, cone_point, terms)


def save_decomposition(dec: SignedDecomposition, path):
    with open(path, "w") as fh:
        json.dump(decomposition_to_dict(dec), fh, indent=1)
        fh.write("\n")


def load_decomposition(path) -> SignedDecomposition:
    with open(path) as fh:
        return decomposition_from_dict(json.load(fh))
