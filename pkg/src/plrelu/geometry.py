"""Exact geometric predicates and constructions on small point sets.

Everything here runs in exact rational arithmetic: the orientation
predicate, affine interpolation, brute-force facet enumeration for
d+2 points, and the Radon partition.  Point sets are tuples of
rationals; no floating point enters any decision.
"""

from dataclasses import dataclass
from itertools import combinations

from .rational import Rat, ZERO, ONE

Point = tuple


class GeneralPositionError(ValueError):
    """Input points violate the required affine-independence conditions."""


def det(rows) -> Rat:
    """Exact determinant by fraction Gaussian elimination (small matrices)."""
    a = [list(row) for row in rows]
    n = len(a)
    sign = 1
    result = ONE
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return ZERO
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            sign = -sign
        p = a[col][col]
        result *= p
        for r in range(col + 1, n):
            factor = a[r][col] / p
            if factor != 0:
                for c in range(col, n):
                    a[r][c] -= factor * a[col][c]
    return sign * result


def solve_linear(rows, rhs):
    """Solve the square system rows·x = rhs exactly; None if singular."""
    n = len(rows)
    a = [list(row) + [r] for row, r in zip(rows, rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return None
        a[col], a[pivot] = a[pivot], a[col]
        p = a[col][col]
        for r in range(n):
            if r != col and a[r][col] != 0:
                factor = a[r][col] / p
                for c in range(col, n + 1):
                    a[r][c] -= factor * a[col][c]
    return tuple(a[i][n] / a[i][i] for i in range(n))


def mat_inverse(rows):
    """Exact inverse of a square matrix; None if singular."""
    n = len(rows)
    a = [list(row) + [ONE if i == j else ZERO for j in range(n)]
         for i, row in enumerate(rows)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return None
        a[col], a[pivot] = a[pivot], a[col]
        p = a[col][col]
        a[col] = [v / p for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                factor = a[r][col]
                a[r] = [v - factor * w for v, w in zip(a[r], a[col])]
    return [tuple(row[n:]) for row in a]


def _check_dims(points, k):
    for p in points:
        if len(p) != k:
            raise ValueError(
                f"dimension mismatch: expected points in R^{k}, got {p!r}"
            )


def orientation(points) -> int:
    """Orientation sign of k+1 points in R^k.

    Returns the sign of det[p_1 - p_0, ..., p_k - p_0]; 0 iff the points
    are affinely dependent.
    """
    k = len(points) - 1
    _check_dims(points, k)
    base = points[0]
    rows = [tuple(p[i] - base[i] for i in range(k)) for p in points[1:]]
    d = det(rows)
    return (d > 0) - (d < 0)


@dataclass(frozen=True)
class AffineFunctional:
    """x ↦ normal·x + offset, with exact rational coefficients."""

    normal: tuple
    offset: Rat

    def __call__(self, point) -> Rat:
        if len(point) != len(self.normal):
            raise ValueError("dimension mismatch in functional evaluation")
        return sum((n * x for n, x in zip(self.normal, point)), self.offset)

    def scaled(self, factor) -> "AffineFunctional":
        return AffineFunctional(
            tuple(factor * n for n in self.normal), factor * self.offset
        )

    def same_function(self, other) -> bool:
        """Equality as functions (coefficient-wise, cross-multiplied)."""
        mine = self.normal + (self.offset,)
        theirs = other.normal + (other.offset,)
        if len(mine) != len(theirs):
            return False
        return mine == theirs


def solve_affine(points, values) -> AffineFunctional:
    """The unique affine functional taking the given value at each of
    k+1 affinely independent points in R^k."""
    k = len(points) - 1
    _check_dims(points, k)
    rows = [tuple(p) + (ONE,) for p in points]
    solution = solve_linear(rows, [Rat(v) for v in values])
    if solution is None:
        raise GeneralPositionError("affinely dependent interpolation points")
    return AffineFunctional(solution[:k], solution[k])


def hyperplane_through(points) -> AffineFunctional:
    """A nonzero functional vanishing exactly on the affine hull of
    d affinely independent points in R^d.

    Coefficients come from cofactor expansion of det[(x,1); (q_1,1); ...],
    so no division is performed.
    """
    d = len(points)
    _check_dims(points, d)
    rows = [tuple(q) + (ONE,) for q in points]
    coeffs = []
    for j in range(d + 1):
        minor = [[row[c] for c in range(d + 1) if c != j] for row in rows]
        coeffs.append(det(minor) if j % 2 == 0 else -det(minor))
    g = AffineFunctional(tuple(coeffs[:d]), coeffs[d])
    if all(c == 0 for c in coeffs):
        raise GeneralPositionError("degenerate hyperplane (dependent points)")
    return g


def check_general_position(points, k):
    """Require every (k+1)-subset of the points affinely independent in R^k."""
    for subset in combinations(range(len(points)), k + 1):
        if orientation([points[i] for i in subset]) == 0:
            raise GeneralPositionError(
                f"points {subset} are affinely dependent"
            )


def hull_facets(points):
    """Facets of the convex hull of exactly d+2 points in R^d.

    Brute force over all d-subsets: a subset spans a facet iff the two
    remaining points lie strictly on the same side of its affine hull.
    Returns (vertex_index_set, functional) pairs with each functional
    normalized to be strictly positive on the hull interior.
    """
    if not points:
        raise ValueError("empty point set")
    d = len(points[0])
    if len(points) != d + 2:
        raise ValueError(f"expected {d + 2} points in R^{d}, got {len(points)}")
    check_general_position(points, d)
    facets = []
    for subset in combinations(range(d + 2), d):
        g = hyperplane_through([points[i] for i in subset])
        rest = [i for i in range(d + 2) if i not in subset]
        va, vb = g(points[rest[0]]), g(points[rest[1]])
        if va > 0 and vb > 0:
            facets.append((frozenset(subset), g))
        elif va < 0 and vb < 0:
            facets.append((frozenset(subset), g.scaled(Rat(-1))))
    return facets


def radon_point(points):
    """The unique Radon partition of d+2 points in general position in R^d.

    Solves the affine dependence Σλ_i p_i = 0, Σλ_i = 0 and splits the
    indices by the sign of λ.  Returns (side_a, side_b, point) with the
    smaller side first (ties broken by smallest index).
    """
    if not points:
        raise ValueError("empty point set")
    d = len(points[0])
    if len(points) != d + 2:
        raise ValueError(f"expected {d + 2} points in R^{d}, got {len(points)}")
    check_general_position(points, d)
    # Homogeneous coordinates of the first d+1 points form an invertible
    # matrix; express their coefficients in terms of the last point's.
    cols = [tuple(p) + (ONE,) for p in points]
    rows = [tuple(cols[i][r] for i in range(d + 1)) for r in range(d + 1)]
    rhs = [-cols[d + 1][r] for r in range(d + 1)]
    mu = solve_linear(rows, rhs)
    if mu is None:
        raise GeneralPositionError("dependent leading points in Radon solve")
    lam = list(mu) + [ONE]
    if any(l == 0 for l in lam):
        raise GeneralPositionError(
            "zero dependence coefficient; input is not in general position"
        )
    side_a = frozenset(i for i, l in enumerate(lam) if l > 0)
    side_b = frozenset(i for i, l in enumerate(lam) if l < 0)
    total = sum(lam[i] for i in side_a)
    point = tuple(
        sum((lam[i] / total) * points[i][c] for i in side_a) for c in range(d)
    )
    if (len(side_b), min(side_b)) < (len(side_a), min(side_a)):
        side_a, side_b = side_b, side_a
    return side_a, side_b, point
