"""Parsing and formatting of exact rationals ("p/q" strings on the wire)."""
from fractions import Fraction
from math import gcd
import numbers

from .errors import InputError


def to_fraction(value, path=None):
    """Coerce ints, Fractions and ``"p/q"`` strings to :class:`Fraction`.

    Floats are rejected: every decision downstream is exact.
    """
    if isinstance(value, bool):
        raise InputError(f"boolean is not a rational: {value!r}", path)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, numbers.Integral):
        return Fraction(int(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise InputError(f"not a rational string: {value!r}", path) from None
    if isinstance(value, numbers.Rational):
        return Fraction(value.numerator, value.denominator)
    raise InputError(f"expected an exact rational, got {type(value).__name__} {value!r}", path)


def format_fraction(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def to_vector(values, path=None):
    if not isinstance(values, (list, tuple)):
        raise InputError("expected a list of rationals", path)
    return tuple(to_fraction(v, f"{path}/{i}" if path else str(i)) for i, v in enumerate(values))


def lcm(a, b):
    return a * b // gcd(a, b) if a and b else max(a, b)


def common_denominator(values):
    d = 1
    for v in values:
        d = lcm(d, Fraction(v).denominator)
    return d


def integer_row(values):
    """Scale rationals by a positive factor to a primitive integer tuple."""
    d = common_denominator(values)
    ints = [int(Fraction(v) * d) for v in values]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return tuple(ints)
