"""Compactly supported piecewise-linear functions on simplicial meshes.

A PLMesh is a conforming simplicial mesh in R^d with one exact rational
height per vertex; boundary vertices must sit at height 0 so the
function vanishes on and outside the mesh.  This module owns the JSON
mesh format, validation, exact evaluation, and a seeded random
generator for test inputs.
"""

import json
import random
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

from .geometry import (
    GeneralPositionError,
    hyperplane_through,
    mat_inverse,
    orientation,
    solve_linear,
)
from .rational import ONE, Rat, ZERO, parse_scalar, point_str, scalar_str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple

    @property
    def valid(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.valid:
            return "valid"
        return "\n".join(self.violations)


@dataclass(frozen=True)
class PLMesh:
    """A PL function R^d -> R given by vertex heights on a simplicial mesh."""

    dim: int
    vertices: tuple
    values: tuple
    simplices: tuple

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        for v in self.vertices:
            if len(v) != self.dim:
                raise ValueError(f"vertex {v!r} is not in R^{self.dim}")
        if len(self.values) != len(self.vertices):
            raise ValueError("one height per vertex required")
        for s in self.simplices:
            if len(s) != self.dim + 1 or len(set(s)) != self.dim + 1:
                raise ValueError(f"simplex {s!r} needs {self.dim + 1} distinct vertices")
            if any(i < 0 or i >= len(self.vertices) for i in s):
                raise ValueError(f"simplex {s!r} has an out-of-range vertex index")

    @property
    def n_simplices(self) -> int:
        return len(self.simplices)

    def simplex_points(self, s):
        return [self.vertices[i] for i in s]

    @cached_property
    def _bboxes(self):
        boxes = []
        for s in self.simplices:
            pts = self.simplex_points(s)
            boxes.append(tuple(
                (min(p[c] for p in pts), max(p[c] for p in pts))
                for c in range(self.dim)
            ))
        return boxes

    @cached_property
    def _barycentric_maps(self):
        # Inverse of the homogeneous vertex matrix; barycentric coords of x
        # are inv · (x, 1).  None marks a degenerate simplex.
        maps = []
        for s in self.simplices:
            rows = [tuple(self.vertices[i]) + (ONE,) for i in s]
            cols = [tuple(rows[r][c] for r in range(self.dim + 1))
                    for c in range(self.dim + 1)]
            maps.append(mat_inverse(cols))
        return maps

    def barycentric(self, simplex_index: int, x):
        inv = self._barycentric_maps[simplex_index]
        if inv is None:
            raise GeneralPositionError(f"simplex {simplex_index} is degenerate")
        xh = tuple(x) + (ONE,)
        return tuple(sum(row[c] * xh[c] for c in range(self.dim + 1)) for row in inv)

    @cached_property
    def boundary_vertices(self) -> frozenset:
        """Vertices on a facet that belongs to exactly one simplex."""
        facet_count = {}
        for s in self.simplices:
            for facet in combinations(sorted(s), self.dim):
                facet_count[facet] = facet_count.get(facet, 0) + 1
        boundary = set()
        for facet, count in facet_count.items():
            if count == 1:
                boundary.update(facet)
        return frozenset(boundary)

    def support_bbox(self):
        return tuple(
            (min(v[c] for v in self.vertices), max(v[c] for v in self.vertices))
            for c in range(self.dim)
        )


def normalize_orientation(mesh: PLMesh) -> PLMesh:
    """Reorder each simplex to positive orientation (degenerate ones kept)."""
    fixed = []
    for s in mesh.simplices:
        if orientation(mesh.simplex_points(s)) < 0:
            s = (s[1], s[0]) + tuple(s[2:])
        fixed.append(tuple(s))
    return PLMesh(mesh.dim, mesh.vertices, mesh.values, tuple(fixed))


def _halfspaces(mesh: PLMesh, s):
    """The d+1 interior-nonnegative facet halfspaces of one mesh simplex."""
    pts = mesh.simplex_points(s)
    out = []
    for i in range(len(pts)):
        rest = [p for j, p in enumerate(pts) if j != i]
        g = hyperplane_through(rest)
        if g(pts[i]) < 0:
            g = g.scaled(Rat(-1))
        out.append(g)
    return out


def _boxes_disjoint(a, b) -> bool:
    return any(amax < bmin or bmax < amin for (amin, amax), (bmin, bmax) in zip(a, b))


def _intersection_vertices(halfspaces, d):
    """All vertices of the polytope cut out by the given halfspaces.

    Brute-force vertex enumeration: every d-subset of the bounding
    hyperplanes is solved and the feasible solutions collected.  Fine for
    the 2(d+1) halfspaces of a simplex pair with d <= 3.
    """
    verts = set()
    for subset in combinations(range(len(halfspaces)), d):
        rows = [halfspaces[i].normal for i in subset]
        rhs = [-halfspaces[i].offset for i in subset]
        x = solve_linear(rows, rhs)
        if x is None:
            continue
        if all(g(x) >= 0 for g in halfspaces):
            verts.add(x)
    return verts


def validate(mesh: PLMesh) -> ValidationReport:
    """Check nondegeneracy, conformity, and zero boundary heights.

    Violations are report content, not exceptions: a report is produced
    for any structurally well-formed mesh.
    """
    violations = []
    degenerate = set()
    for idx, s in enumerate(mesh.simplices):
        sign = orientation(mesh.simplex_points(s))
        if sign == 0:
            degenerate.add(idx)
            violations.append(f"simplex {idx} {s} is degenerate (zero volume)")
        elif sign < 0:
            violations.append(f"simplex {idx} {s} is negatively oriented")

    halfspaces = {
        idx: _halfspaces(mesh, s)
        for idx, s in enumerate(mesh.simplices)
        if idx not in degenerate
    }
    boxes = mesh._bboxes
    for i, j in combinations(sorted(halfspaces), 2):
        if _boxes_disjoint(boxes[i], boxes[j]):
            continue
        shared = set(mesh.simplices[i]) & set(mesh.simplices[j])
        shared_coords = {tuple(mesh.vertices[v]) for v in shared}
        cut = _intersection_vertices(halfspaces[i] + halfspaces[j], mesh.dim)
        extra = cut - shared_coords
        if extra:
            violations.append(
                f"simplices {i} and {j} are non-conforming: intersection has "
                f"vertices {sorted(extra)} outside their shared face"
            )

    for v in sorted(mesh.boundary_vertices):
        if mesh.values[v] != 0:
            violations.append(
                f"boundary vertex {v} has nonzero value {scalar_str(mesh.values[v])}"
            )
    return ValidationReport(tuple(violations))


def eval_mesh(mesh: PLMesh, x) -> Rat:
    """Exact value of the PL function at x; 0 outside the mesh."""
    if len(x) != mesh.dim:
        raise ValueError(f"point {x!r} is not in R^{mesh.dim}")
    x = tuple(Rat(c) for c in x)
    for idx, s in enumerate(mesh.simplices):
        box = mesh._bboxes[idx]
        if any(c < lo or c > hi for c, (lo, hi) in zip(x, box)):
            continue
        lam = mesh.barycentric(idx, x)
        if all(l >= 0 for l in lam):
            return sum(l * mesh.values[v] for l, v in zip(lam, s))
    return ZERO


def _random_height(rng: random.Random) -> Rat:
    return Rat(rng.randint(-255, 255), rng.randint(1, 4))


def _delaunay_simplices(points_int, dim):
    from scipy.spatial import Delaunay, QhullError

    try:
        tri = Delaunay(points_int)
    except (QhullError, ValueError):
        return None
    return [tuple(int(i) for i in s) for s in tri.simplices]


def generate_random(dim: int, n_target: int, seed: int) -> PLMesh:
    """Deterministic random valid mesh with at most n_target simplices.

    Integer grid points are triangulated (sorted intervals for d=1,
    Delaunay for d=2,3) and interior vertices get random rational
    heights; boundary vertices are pinned to 0.  Candidate point sets
    whose triangulation is exactly degenerate are rejected and resampled.
    """
    if dim < 1 or n_target < 1:
        raise ValueError("dim and n_target must be >= 1")
    if dim > 3:
        raise ValueError("random generation supports dim <= 3 only")
    rng = random.Random(f"mesh-{dim}-{n_target}-{seed}")

    if dim == 1:
        span = 4 * (n_target + 2)
        xs = sorted(rng.sample(range(span), n_target + 1))
        vertices = tuple((Rat(x),) for x in xs)
        simplices = tuple((i, i + 1) for i in range(len(xs) - 1))
    else:
        vertices = simplices = None
        grid = 4 * n_target + 8
        best = None
        for k in range(dim + 1, dim + 2 + 3 * n_target):
            candidate = None
            for _ in range(40):
                pts = set()
                while len(pts) < k:
                    pts.add(tuple(rng.randrange(grid) for _ in range(dim)))
                pts = sorted(pts)
                simps = _delaunay_simplices(pts, dim)
                if simps is None:
                    continue
                rats = [tuple(Rat(c) for c in p) for p in pts]
                if any(orientation([rats[i] for i in s]) == 0 for s in simps):
                    continue
                candidate = (tuple(rats), tuple(simps))
                break
            if candidate is None:
                continue
            if len(candidate[1]) > n_target:
                break
            best = candidate
        if best is None:
            raise RuntimeError(
                f"could not triangulate within {n_target} simplices (seed {seed})"
            )
        vertices, simplices = best

    skeleton = normalize_orientation(
        PLMesh(dim, vertices, tuple(ZERO for _ in vertices), simplices)
    )
    values = tuple(
        ZERO if i in skeleton.boundary_vertices else _random_height(rng)
        for i in range(len(vertices))
    )
    return PLMesh(dim, skeleton.vertices, values, skeleton.simplices)


def stratified_samples(mesh: PLMesh, count: int, rng: random.Random):
    """Rational sample points hitting vertices, facets, simplex interiors,
    and the exterior; PL disagreements concentrate on measure-zero sets
    that uniform sampling misses."""
    if count < 1:
        raise ValueError("need at least one sample")
    samples = [tuple(v) for v in mesh.vertices[: count]]

    def convex_combo(pts):
        weights = [Rat(rng.randint(1, 16)) for _ in pts]
        total = sum(weights)
        return tuple(
            sum((w / total) * p[c] for w, p in zip(weights, pts))
            for c in range(mesh.dim)
        )

    facets = sorted({
        facet
        for s in mesh.simplices
        for facet in combinations(sorted(s), mesh.dim)
    })
    box = mesh.support_bbox()
    spread = max(max(hi - lo for lo, hi in box), ONE)
    kind = 0
    while len(samples) < count:
        if kind == 0:
            s = mesh.simplices[rng.randrange(len(mesh.simplices))]
            samples.append(convex_combo(mesh.simplex_points(s)))
        elif kind == 1 and facets:
            f = facets[rng.randrange(len(facets))]
            samples.append(convex_combo([mesh.vertices[i] for i in f]))
        else:
            samples.append(tuple(
                lo - spread + Rat(rng.randint(0, int(3 * spread) * 16), 16)
                for lo, hi in box
            ))
        kind = (kind + 1) % 3
    return samples[:count]


def mesh_to_dict(mesh: PLMesh) -> dict:
    return {
        "dim": mesh.dim,
        "vertices": [point_str(v) for v in mesh.vertices],
        "values": [scalar_str(v) for v in mesh.values],
        "simplices": [list(s) for s in mesh.simplices],
    }


def mesh_from_dict(data: dict) -> PLMesh:
    try:
        dim = int(data["dim"])
        vertices = tuple(
            tuple(parse_scalar(c) for c in v) for v in data["vertices"]
        )
        values = tuple(parse_scalar(v) for v in data["values"])
        simplices = tuple(tuple(int(i) for i in s) for s in data["simplices"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed mesh data: {exc}") from exc
    return normalize_orientation(PLMesh(dim, vertices, values, simplices))


def save_mesh(mesh: PLMesh, path):
    with open(path, "w") as fh:
        json.dump(mesh_to_dict(mesh), fh, indent=1)
        fh.write("\n")


def load_mesh(path) -> PLMesh:
    with open(path) as fh:
        return mesh_from_dict(json.load(fh))
