"""Rational backend and exact Gaussian-rational coefficient helpers.

Coefficients are stored as ``(re, im)`` pairs.  Exact pairs hold rationals of
the active backend (GMP ``mpq`` when gmpy2 imports, :class:`fractions.Fraction`
otherwise); floating pairs hold Python floats.  Set ``FORMQM_PURE=1`` to force
the pure-Python backend.
"""
from __future__ import annotations

import os
from fractions import Fraction
from typing import NamedTuple

BACKEND = "fractions"
Q = Fraction
if os.environ.get("FORMQM_PURE", "") not in ("1", "true", "yes"):
    try:
        from gmpy2 import mpq as Q  # type: ignore[no-redef]

        BACKEND = "gmpy2"
    except ImportError:  # pragma: no cover - depends on environment
        pass

ZERO = Q(0)
ONE = Q(1)


def rational(x) -> object:
    """Convert int / Fraction / decimal string / ``"p/q"`` to the backend rational."""
    if isinstance(x, float):
        raise TypeError("floats are not exact rationals; use a string or Fraction")
    if isinstance(x, Fraction):
        return Q(x.numerator, x.denominator)
    if isinstance(x, str):
        f = Fraction(x)
        return Q(f.numerator, f.denominator)
    return Q(x)


def to_fraction(x) -> Fraction:
    if isinstance(x, float):
        return Fraction(x)
    return Fraction(int(x.numerator), int(x.denominator))


class Gaussian(NamedTuple):
    """Exact complex rational ``re + i*im`` returned at API boundaries."""

    re: object
    im: object

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def conjugate(self) -> "Gaussian":
        return Gaussian(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __eq__(self, other):
        if isinstance(other, tuple):
            return tuple.__eq__(self, other)
        if isinstance(other, complex):
            return float(self.re) == other.real and float(self.im) == other.imag
        return self.im == 0 and self.re == other

    __hash__ = tuple.__hash__

    def __str__(self):
        return format_coeff((self.re, self.im))


def is_exact_pair(c) -> bool:
    return not (isinstance(c[0], float) or isinstance(c[1], float))


def coerce(value):
    """Scalar -> coefficient pair.  ints/Fractions/strings/Gaussian stay exact."""
    if isinstance(value, tuple) and len(value) == 2:
        re, im = value
        if isinstance(re, float) or isinstance(im, float):
            return (float(re), float(im))
        return (rational(re), rational(im))
    if isinstance(value, complex):
        return (value.real, value.imag)
    if isinstance(value, float):
        return (value, 0.0)
    return (rational(value), ZERO)


def to_float_pair(c):
    return (float(c[0]), float(c[1]))


def pair_mul(a, b):
    ar, ai = a
    br, bi = b
    if ai == 0 and bi == 0:
        return (ar * br, ai * bi)
    return (ar * br - ai * bi, ar * bi + ai * br)


def pair_inv(a):
    ar, ai = a
    n = ar * ar + ai * ai
    if n == 0:
        raise ZeroDivisionError("inverse of zero coefficient")
    if isinstance(n, float):
        return (ar / n, -ai / n)
    return (ar / n, -ai / n)


def pair_is_zero(c) -> bool:
    return c[0] == 0 and c[1] == 0


def format_real(x) -> str:
    if isinstance(x, float):
        return repr(float(x))
    return str(x)


def format_coeff(c) -> str:
    re, im = c
    if im == 0:
        return format_real(re)
    if re == 0:
        if im == 1:
            return "i"
        if im == -1:
            return "-i"
        return f"{format_real(im)}i"
    sign = "-" if im < 0 else "+"
    mag = -im if im < 0 else im
    mag_s = "" if mag == 1 else format_real(mag)
    return f"({format_real(re)}{sign}{mag_s}i)"


def sqrt_rational(x):
    """Exact square root of a non-negative rational, or None if irrational."""
    f = to_fraction(x)
    if f < 0:
        return None
    from math import isqrt

    n, d = f.numerator, f.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Q(rn, rd)
    return None
