"""Exact rational scalars and their string encoding.

All geometry in this package is exact: coordinates, heights, and
functional coefficients are arbitrary-precision rationals.  gmpy2's mpq
is used when available (roughly an order of magnitude faster); the
stdlib Fraction is a drop-in fallback.
"""

from fractions import Fraction

try:
    from gmpy2 import mpq as Rat
except ImportError:  # pragma: no cover
    Rat = Fraction

ZERO = Rat(0)
ONE = Rat(1)


def parse_scalar(value) -> Rat:
    """Parse an exact scalar from an int, a "p/q" string, or a decimal string.

    Floats are rejected: binary floating point cannot round-trip decimal
    literals exactly, so numeric JSON fields must be ints or strings.
    """
    if isinstance(value, bool):
        raise ValueError("booleans are not scalars")
    if isinstance(value, int):
        return Rat(value)
    if isinstance(value, str):
        try:
            return Rat(Fraction(value))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse scalar {value!r}") from exc
    if isinstance(value, float):
        raise ValueError(
            f"float {value!r} is not exact; write it as a quoted string"
        )
    return Rat(value)


def scalar_str(q) -> str:
    """Canonical string form: "p" for integers, "p/q" otherwise."""
    return str(q)


def parse_point(coords) -> tuple:
    return tuple(parse_scalar(c) for c in coords)


def point_str(point) -> list:
    return [scalar_str(c) for c in point]
