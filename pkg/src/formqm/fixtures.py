"""Reference data transcribed verbatim, with a tiny parser for the entry strings.

Entry grammar: a sum of terms ``[sign] [rational] [i] [*symbol] [*dx|dy|dz]``
where ``symbol`` is ``rho`` or ``xi`` and a bare ``i`` multiplies by the
imaginary unit (``"1/4i"`` is ``i/4``, ``"-2i*rho*dz"`` is ``-2 i rho d_z``).
Form keys are wedge words such as ``"dz^dx"`` (sign applied on parsing).
"""
from __future__ import annotations

import re
from fractions import Fraction

from .exterior import DifferentialForm

# ideal basis of P(xi) = 1/2 + rho dx + xi dx^dy
PSI_REAL = (
    {"1": "1", "dx": "2*rho", "dx^dy": "2*xi"},
    {"dy": "1", "dx": "-2*xi", "dx^dy": "-2*rho"},
    {"dy^dz": "1", "dz^dx": "2*xi", "dx^dy^dz": "2*rho"},
    {"dz": "1", "dz^dx": "2*rho", "dx^dy^dz": "2*xi"},
)

GENERATORS_REAL = {
    "dx": (("2*rho", "-2*xi", "0", "0"),
           ("2*xi", "-2*rho", "0", "0"),
           ("0", "0", "2*rho", "2*xi"),
           ("0", "0", "-2*xi", "-2*rho")),
    "dy": (("0", "1", "0", "0"),
           ("1", "0", "0", "0"),
           ("0", "0", "0", "1"),
           ("0", "0", "1", "0")),
    "dz": (("0", "0", "0", "1"),
           ("0", "0", "-1", "0"),
           ("0", "-1", "0", "0"),
           ("1", "0", "0", "0")),
}

VOLUME_J = (("0", "0", "-2*rho", "-2*xi"),
            ("0", "0", "-2*xi", "-2*rho"),
            ("2*rho", "-2*xi", "0", "0"),
            ("-2*xi", "2*rho", "0", "0"))

# J v psi_a as combinations of psi_1..psi_4
J_ON_BASIS = (
    ("0", "0", "2*rho", "-2*xi"),
    ("0", "0", "-2*xi", "2*rho"),
    ("-2*rho", "-2*xi", "0", "0"),
    ("-2*xi", "-2*rho", "0", "0"),
)

DIRAC_REAL = (
    ("2*rho*dx", "dy - 2*xi*dx", "0", "dz"),
    ("dy + 2*xi*dx", "-2*rho*dx", "-dz", "0"),
    ("0", "-dz", "2*rho*dx", "2*xi*dx + dy"),
    ("dz", "0", "dy - 2*xi*dx", "-2*rho*dx"),
)

DIRAC_COMPLEX = (
    ("2*rho*dx + 2i*xi*dz", "dy - 2*xi*dx - 2i*rho*dz"),
    ("dy + 2*xi*dx + 2i*rho*dz", "-2*rho*dx - 2i*xi*dz"),
)

COMPLEX_IMAGES = {
    "dx": (("2*rho", "-2*xi"), ("2*xi", "-2*rho")),
    "dy": (("0", "1"), ("1", "0")),
    "dz": (("2i*xi", "-2i*rho"), ("2i*rho", "-2i*xi")),
}

COMPLEX_PROJECTOR = {"1": "1/4", "dz": "1/4", "dx^dy": "1/4i", "dx^dy^dz": "1/4i"}

PSI_COMPLEX = (
    {"1": "1", "dz": "1", "dx^dy": "i", "dx^dy^dz": "i"},
    {"dx": "1", "dy": "i", "dy^dz": "i", "dx^dz": "1"},
)

# (generator, source index, coefficient, target index): g v psi_s = c psi_t
COMPLEX_IDENTITIES = (
    ("dx", 0, "1", 1),
    ("dy", 0, "-i", 1),
    ("dz", 0, "1", 0),
    ("dz", 1, "-1", 1),
)

PAULI_REFERENCE = {
    "dx": (("0", "1"), ("1", "0")),
    "dy": (("0", "i"), ("-i", "0")),
    "dz": (("1", "0"), ("0", "-1")),
}

HODGE_R3 = (
    ("1", "dx^dy^dz"), ("dx^dy^dz", "1"),
    ("dx", "dy^dz"), ("dy^dz", "dx"),
    ("dy", "dz^dx"), ("dz^dx", "dy"),
    ("dz", "dx^dy"), ("dx^dy", "dz"),
)

# reference prefactors: phase, square under the root, power of pi
J1_FACTORS = {1: ((0, 1), Fraction(3, 8), Fraction(-1)),
              0: ((0, 1), Fraction(3, 4), Fraction(-1)),
              -1: ((0, 1), Fraction(3, 8), Fraction(-1))}
# spin-1/2 forms: prefactor and polynomial in front of theta^+ = (theta^1 - i theta^2) / sqrt(2)
HALF_REFERENCE = {Fraction(1, 2): (((1, 0), Fraction(1, 4), Fraction(-1)), "v"),
                Fraction(-1, 2): (((-1, 0), Fraction(1, 4), Fraction(-1)), "u")}

_H = Fraction(1, 2)
# CG towers with the index layout of the reference table: (sign, square, m of Y_1, m of alpha)
TOWERS_REFERENCE = {
    (Fraction(3, 2), Fraction(3, 2)): ((1, Fraction(1), 1, _H),),
    (Fraction(3, 2), _H): ((1, Fraction(1, 3), 1, _H), (1, Fraction(2, 3), 0, -_H)),
    (Fraction(3, 2), -_H): ((1, Fraction(1, 3), -1, _H), (1, Fraction(2, 3), 0, -_H)),
    (Fraction(3, 2), Fraction(-3, 2)): ((1, Fraction(1), -1, -_H),),
    (_H, _H): ((1, Fraction(2, 3), 1, _H), (-1, Fraction(1, 3), 0, -_H)),
    (_H, -_H): ((-1, Fraction(2, 3), -1, _H), (1, Fraction(1, 3), 0, -_H)),
}

_TERM = re.compile(
    r"\s*([+-])?\s*(\d+(?:/\d+)?)?\s*(i)?\s*(?:\*?\s*(rho|xi))?\s*(?:\*?\s*(d[xyz]))?\s*")


def parse_terms(text: str) -> list:
    """``[(coeff pair, symbol or None, derivative or None), ...]``."""
    text = text.strip()
    out = []
    pos = 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse {text!r} at {pos}")
        sign, num, imag, sym, der = m.groups()
        if num is None and imag is None and sym is None and der is None:
            raise ValueError(f"empty term in {text!r}")
        q = Fraction(num) if num else Fraction(1)
        if sign == "-":
            q = -q
        coeff = (Fraction(0), q) if imag else (q, Fraction(0))
        out.append((coeff, sym, der))
        pos = m.end()
    return out


def scalar(text: str, scalars) -> object:
    """Parse a scalar entry into the coefficient ring of ``scalars`` (a CliffordScalars)."""
    ring = scalars.ring
    total = ring.zero()
    if text.strip() == "0":
        return total
    for coeff, sym, der in parse_terms(text):
        if der is not None:
            raise ValueError(f"unexpected derivative in scalar entry {text!r}")
        base = {"rho": scalars.rho, "xi": scalars.xi, None: ring.one()}[sym]
        total = total + base.scale(coeff)
    return total


def operator_entry(text: str, scalars) -> dict:
    """``{"x": coeff, ...}`` for an entry like ``"dy - 2*xi*dx"``."""
    ring = scalars.ring
    out: dict = {}
    if text.strip() == "0":
        return out
    for coeff, sym, der in parse_terms(text):
        if der is None:
            raise ValueError(f"operator entry without derivative: {text!r}")
        base = {"rho": scalars.rho, "xi": scalars.xi, None: ring.one()}[sym]
        key = der[1]
        out[key] = out.get(key, ring.zero()) + base.scale(coeff)
    return out


def matrix(rows, scalars) -> list:
    return [[scalar(e, scalars) for e in row] for row in rows]


def operator_symbols(rows, scalars, coords=("x", "y", "z")) -> dict:
    """Split an operator matrix into ``{coord: coefficient matrix}``."""
    ring = scalars.ring
    n, m = len(rows), len(rows[0])
    out = {c: [[ring.zero() for _ in range(m)] for _ in range(n)] for c in coords}
    for i, row in enumerate(rows):
        for j, e in enumerate(row):
            for c, coef in operator_entry(e, scalars).items():
                out[c][i][j] = coef
    return out


def form(entries: dict, manifold, scalars) -> DifferentialForm:
    return DifferentialForm.from_labels(manifold, {k: scalar(v, scalars) for k, v in entries.items()})
