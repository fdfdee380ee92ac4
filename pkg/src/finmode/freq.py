"""Exact rational wave vectors.

A frequency is a plain ``tuple`` of three :class:`fractions.Fraction`.
Everything combinatorial (support sums, symmetry, coplanarity, equal radii)
is decided on these exactly; floats only appear when a formula needs |n|.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

import numpy as np

Frequency = tuple[Fraction, Fraction, Fraction]

ZERO: Frequency = (Fraction(0), Fraction(0), Fraction(0))


def freq(x, y, z) -> Frequency:
    """Build a frequency from anything :class:`Fraction` accepts."""
    return (Fraction(x), Fraction(y), Fraction(z))


def as_freq(n) -> Frequency:
    if isinstance(n, tuple) and len(n) == 3 and all(isinstance(c, Fraction) for c in n):
        return n
    if len(n) != 3:
        raise ValueError(f"frequency needs three components, got {n!r}")
    return (Fraction(n[0]), Fraction(n[1]), Fraction(n[2]))


def add(a: Frequency, b: Frequency) -> Frequency:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def sub(a: Frequency, b: Frequency) -> Frequency:
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def neg(a: Frequency) -> Frequency:
    return (-a[0], -a[1], -a[2])


def scale(r, a: Frequency) -> Frequency:
    r = Fraction(r)
    return (r * a[0], r * a[1], r * a[2])


def dot(a: Frequency, b: Frequency) -> Fraction:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def norm2(a: Frequency) -> Fraction:
    return dot(a, a)


def cross(a: Frequency, b: Frequency) -> Frequency:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def det3(a: Frequency, b: Frequency, c: Frequency) -> Fraction:
    return dot(a, cross(b, c))


def is_zero(a: Frequency) -> bool:
    return a[0] == 0 and a[1] == 0 and a[2] == 0


def parallel(a: Frequency, b: Frequency) -> bool:
    """True when ``a`` and ``b`` are linearly dependent (zero counts as parallel)."""
    return is_zero(cross(a, b))


def to_float(a: Frequency) -> np.ndarray:
    return np.array([float(a[0]), float(a[1]), float(a[2])])


def is_canonical(a: Frequency) -> bool:
    """First nonzero component positive; picks one member of each ``{n, -n}``."""
    for c in a:
        if c != 0:
            return c > 0
    return False


def canonical(a: Frequency) -> Frequency:
    return a if is_canonical(a) else neg(a)


def sort_key(a: Frequency):
    return (a[0], a[1], a[2])


def common_denominator(points: Iterable[Frequency]) -> int:
    d = 1
    for p in points:
        for c in p:
            d = lcm(d, c.denominator)
    return d


def to_integer_vectors(points: Sequence[Frequency]) -> tuple[list[tuple[int, int, int]], int]:
    """Scale rational points onto a common integer grid. Returns (ints, scale)."""
    d = common_denominator(points)
    out = [(int(p[0] * d), int(p[1] * d), int(p[2] * d)) for p in points]
    return out, d


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries."""
    g = 0
    for c in v:
        g = gcd(g, int(c))
    if g == 0:
        return tuple(int(c) for c in v)
    return tuple(int(c) // g for c in v)


def primitive_direction(a: Frequency) -> tuple[int, int, int]:
    """Integer primitive vector along ``a``, canonical sign."""
    ints, _ = to_integer_vectors([canonical(a)])
    return primitive(ints[0])


def rank(points: Sequence[Frequency]) -> int:
    """Exact dimension of the linear span of ``points`` (0..3)."""
    basis: list[Frequency] = []
    for p in points:
        if is_zero(p):
            continue
        if not basis:
            basis.append(p)
        elif len(basis) == 1:
            if not parallel(basis[0], p):
                basis.append(p)
        elif len(basis) == 2:
            if det3(basis[0], basis[1], p) != 0:
                return 3
    return len(basis)


def spanning_pair(points: Sequence[Frequency]) -> tuple[Frequency, Frequency] | None:
    """Two lexicographically-smallest linearly independent points, if any."""
    ordered = sorted((p for p in points if not is_zero(p)), key=sort_key)
    for i, a in enumerate(ordered):
        for b in ordered[i + 1:]:
            if not parallel(a, b):
                return a, b
    return None


def fmt(a: Frequency) -> str:
    return "(" + ", ".join(str(c) for c in a) + ")"
