import random

import pytest

from plrelu.mesh import PLMesh
from plrelu.rational import Rat
from plrelu.simplex import LiftedSimplex


@pytest.fixture
def hat_mesh():
    """f on the line: 0 at x=0, 1 at x=1, 0 at x=2, linear in between."""
    return PLMesh(
        dim=1,
        vertices=((Rat(0),), (Rat(1),), (Rat(2),)),
        values=(Rat(0), Rat(1), Rat(0)),
        simplices=((0, 1), (1, 2)),
    )


def rand_rat(rng: random.Random, span: int = 64, max_den: int = 4) -> Rat:
    return Rat(rng.randint(-span, span), rng.randint(1, max_den))


def rand_point(rng: random.Random, dim: int, span: int = 64):
    return tuple(rand_rat(rng, span) for _ in range(dim))


def random_lifted_simplex(rng: random.Random, d: int, span: int = 64) -> LiftedSimplex:
    """Rejection-sample a nondegenerate (d+1)-simplex in R^{d+1}."""
    while True:
        vertices = tuple(rand_point(rng, d + 1, span) for _ in range(d + 2))
        try:
            return LiftedSimplex(vertices)
        except ValueError:
            continue


def shadow_samples(rng: random.Random, delta: LiftedSimplex, count: int):
    """Rational points in and around the shadow bounding box."""
    box = delta.shadow_bbox
    points = []
    for _ in range(count):
        points.append(tuple(
            lo + Rat(rng.randint(-8, 40), 32) * (hi - lo + 1)
            for lo, hi in box
        ))
    return points
