"""Simplex functions: vertical-extent evaluation and max-min extraction.

A nondegenerate (d+1)-simplex in R^{d+1} induces the function whose
value at x is the length of the vertical segment it cuts out over x.
Two independent computations of this function live here on purpose:
half-space clipping (tau_eval) and the pyramid-over-the-shadow max-min
form; each serves as the other's test oracle.
"""

import math
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

from .geometry import (
    GeneralPositionError,
    hull_facets,
    hyperplane_through,
    orientation,
    radon_point,
)
from .rational import Rat, ZERO


def max_functionals(dim: int) -> int:
    """Upper bound on the max-min functional count for shadows of
    (dim+1)-simplices: the facet count of d+2 points in R^d."""
    return math.ceil((dim + 2) ** 2 / 4)


@dataclass(frozen=True)
class LiftedSimplex:
    """A (d+1)-simplex in R^{d+1}, full-dimensional with no vertical face."""

    vertices: tuple

    def __post_init__(self):
        d = self.dim
        if d < 1:
            raise ValueError("need at least 3 vertices (d >= 1)")
        for v in self.vertices:
            if len(v) != d + 1:
                raise ValueError(f"vertex {v!r} is not in R^{d + 1}")
        if orientation(self.vertices) == 0:
            raise GeneralPositionError("simplex is not full-dimensional")
        shadow = self.shadow_vertices
        for subset in combinations(range(d + 2), d + 1):
            if orientation([shadow[i] for i in subset]) == 0:
                raise GeneralPositionError(
                    f"face {subset} is vertical (projection is degenerate)"
                )

    @property
    def dim(self) -> int:
        return len(self.vertices) - 2

    @property
    def shadow_vertices(self):
        return tuple(v[:-1] for v in self.vertices)

    @cached_property
    def facet_halfspaces(self):
        """One interior-nonnegative halfspace per facet of the simplex."""
        out = []
        for i, apex in enumerate(self.vertices):
            rest = [v for j, v in enumerate(self.vertices) if j != i]
            g = hyperplane_through(rest)
            if g(apex) < 0:
                g = g.scaled(Rat(-1))
            out.append(g)
        return tuple(out)

    @cached_property
    def shadow_bbox(self):
        pts = self.shadow_vertices
        return tuple(
            (min(p[c] for p in pts), max(p[c] for p in pts))
            for c in range(self.dim)
        )


def tau_eval(delta: LiftedSimplex, x) -> Rat:
    """Length of the vertical segment over x inside the simplex, by
    clipping the vertical line against the d+2 facet halfspaces."""
    d = delta.dim
    if len(x) != d:
        raise ValueError(f"point {x!r} is not in R^{d}")
    box = delta.shadow_bbox
    if any(c < lo or c > hi for c, (lo, hi) in zip(x, box)):
        return ZERO
    lo = hi = None
    for g in delta.facet_halfspaces:
        # Constraint on t: a·t + rest >= 0, with a != 0 since no facet
        # is vertical.
        a = g.normal[-1]
        rest = sum((n * c for n, c in zip(g.normal[:-1], x)), g.offset)
        bound = -rest / a
        if a > 0:
            lo = bound if lo is None or bound > lo else lo
        else:
            hi = bound if hi is None or bound < hi else hi
    length = hi - lo
    return length if length > 0 else ZERO


@dataclass(frozen=True)
class MaxMinForm:
    """tau as x ↦ max(0, min_i g_i(x)), with the pyramid apex recorded."""

    functionals: tuple
    apex: tuple
    apex_height: Rat

    def __call__(self, x) -> Rat:
        value = min(g(x) for g in self.functionals)
        return value if value > 0 else ZERO


def maxmin_form(delta: LiftedSimplex) -> MaxMinForm:
    """Extract the max-min normal form of a simplex function.

    The graph of tau is the pyramid over the shadow polytope whose apex
    sits over the Radon point p of the d+2 projected vertices, at height
    tau(p).  Coning each shadow facet to p gives the pieces: the linear
    function on the piece over facet i vanishes on the facet's hyperplane
    and takes the apex height at p, i.e. g_i = h * H_i / H_i(p).
    """
    shadow = delta.shadow_vertices
    _, _, p = radon_point(shadow)
    h = tau_eval(delta, p)
    functionals = []
    for _, hs in hull_facets(shadow):
        at_p = hs(p)
        if at_p <= 0:
            raise GeneralPositionError(
                "pyramid apex lies on a shadow facet hyperplane"
            )
        functionals.append(hs.scaled(h / at_p))
    return MaxMinForm(tuple(functionals), p, h)


def translated(delta: LiftedSimplex, shift) -> LiftedSimplex:
    """Translate horizontally by shift (length d) and/or vertically if
    shift has length d+1."""
    full = tuple(shift) + (ZERO,) if len(shift) == delta.dim else tuple(shift)
    return LiftedSimplex(tuple(
        tuple(c + s for c, s in zip(v, full)) for v in delta.vertices
    ))
