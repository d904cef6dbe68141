"""Exact value helpers shared across the toolkit.

All quantities (capacities, flows, LP entries) are `fractions.Fraction`.
A single distinguished UNBOUNDED value stands in for an infinite capacity;
it is absorbing under addition and compares greater than every rational.
"""

from __future__ import annotations

from fractions import Fraction


class Unbounded:
    """Singleton marker for an infinite capacity."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNBOUNDED"


UNBOUNDED = Unbounded()


def is_unbounded(x) -> bool:
    return x is UNBOUNDED


def as_fraction(x) -> Fraction:
    if is_unbounded(x):
        raise ValueError("expected a finite value, got UNBOUNDED")
    return x if isinstance(x, Fraction) else Fraction(x)


def cap_add(a, b):
    """Sum of two capacities; UNBOUNDED absorbs."""
    if is_unbounded(a) or is_unbounded(b):
        return UNBOUNDED
    return a + b


def cap_min(a, b):
    if is_unbounded(a):
        return b
    if is_unbounded(b):
        return a
    return a if a <= b else b


def cap_le(a, b) -> bool:
    """a <= b with UNBOUNDED as the top element."""
    if is_unbounded(b):
        return True
    if is_unbounded(a):
        return False
    return a <= b


def exact(x) -> Fraction:
    """Fraction from an int, string, or Fraction; floats are refused
    because binary rounding would silently change the instance."""
    if isinstance(x, float):
        raise TypeError(f"refusing float {x!r}; pass a Fraction, int, or 'p/q' string")
    return Fraction(x)


def parse_value(token: str) -> Fraction:
    """Parse an integer or `p/q` rational token."""
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational value: {token!r}") from exc


def format_value(x) -> str:
    """Render a value the way the file formats expect (`7` or `7/3`)."""
    if is_unbounded(x):
        return "inf"
    x = as_fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"
