"""Monopole harmonics, vector-valued harmonics and the radial spectrum.

Eigenvalue dictionary (anti-Hermitian generators, see :mod:`formqm.frames`):
``L_3 psi = i m psi``, ``X_3 psi = i n psi``, ``sum L_a^2 psi = -j(j+1) psi``.
On monomials: ``u`` has ``(n, m) = (-1/2, -1/2)``, ``v`` ``(-1/2, 1/2)``,
``ub`` ``(1/2, 1/2)`` and ``vb`` ``(1/2, -1/2)``.
"""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Sequence

import numpy as np

from . import _scalar as S
from .bessel import jv
from .exterior import DifferentialForm, exact_differential
from .fixtures import TOWERS_REFERENCE
from .frames import (frame_field, hopf_projection, left_invariant_fields, r4_monopole,
                     radial_derivation, right_invariant_fields, su2_killing)
from .polyring import SU2, SU2R, Derivation, Polynomial, haar_integral


def half_integer(value) -> Fraction:
    """Parse ``1``, ``"3/2"``, ``0.5`` ... and insist on a multiple of 1/2."""
    if isinstance(value, float):
        value = Fraction(repr(value))
    q = Fraction(value)
    if (2 * q).denominator != 1:
        raise ValueError(f"{value} is not a half-integer")
    return q


# ---------------------------------------------------------------------------
# constants
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _load_constants(path: str | None) -> dict:
    if path:
        with open(path) as fh:
            return json.load(fh)
    with resources.files("formqm").joinpath("data/constants.json").open() as fh:
        return json.load(fh)


def constants() -> dict:
    """Frozen constants; ``FORMQM_CONSTANTS`` may point at a replacement JSON file."""
    return _load_constants(os.environ.get("FORMQM_CONSTANTS") or None)


def haar_volume() -> float:
    """Total mass of the Haar measure under which the reference harmonic bases are orthonormal."""
    c = constants()["haar_volume"]
    return float(c["coefficient"]) * math.pi ** c["pi_power"]


def constraint_sign() -> int:
    return int(constants()["constraint_sign"])


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------

_SU2_CACHE: dict = {}


def _fields(ring):
    if ring not in _SU2_CACHE:
        _SU2_CACHE[ring] = (left_invariant_fields(ring), right_invariant_fields(ring), hopf_projection(ring))
    return _SU2_CACHE[ring]


def lowering_m(ring=SU2) -> Derivation:
    """``J_- = -i(L_1 - i L_2)``: lowers ``m`` by one with Condon-Shortley phases."""
    _, L, _ = _fields(ring)
    return L[0].times((0, -1)) - L[1]


def lowering_n(ring=SU2) -> Derivation:
    """``N_- = i(X_1 + i X_2)``: lowers ``n`` by one."""
    X, _, _ = _fields(ring)
    return X[0].times((0, 1)) - X[1]


def casimir(p: Polynomial) -> Polynomial:
    """``sum_a L_a^2 p``."""
    _, L, _ = _fields(p.ring)
    out = p.ring.zero()
    for La in L:
        out = out + La(La(p))
    return out


def constraint_operator(p: Polynomial) -> Polynomial:
    """``x^a L_a p`` with the Hopf coordinates ``x^a``."""
    _, L, xs = _fields(p.ring)
    out = p.ring.zero()
    for x, La in zip(xs, L):
        out = out + x * La(p)
    return out


def _form_op(form: DifferentialForm, fn) -> DifferentialForm:
    return form.map_coefficients(fn)


def _apply_operator(op: str, psi):
    """Apply a named operator to a polynomial or a form on SU(2)."""
    if isinstance(psi, DifferentialForm):
        M = psi.manifold
        if op == "X3":
            return psi.lie_derivative(frame_field(M, M.dim - 1))
        # right-invariant fields annihilate the left-invariant coframe,
        # so they act on forms through the coefficients only
        return _form_op(psi, lambda c: _apply_operator(op, c))
    X, L, _ = _fields(psi.ring)
    if op == "L2":
        return casimir(psi)
    if op == "Lz":
        return L[2](psi)
    if op == "xL":
        return constraint_operator(psi)
    if op == "X3":
        return X[2](psi)
    raise ValueError(f"unknown operator {op}")


OPERATORS = ("L2", "Lz", "xL", "X3")


def expected_eigenvalue(op: str, j, n, m) -> tuple:
    """Exact eigenvalue as a coefficient pair under the anti-Hermitian convention."""
    j, n, m = (Fraction(x) if x is not None else None for x in (j, n, m))
    if op == "L2":
        return (-j * (j + 1), Fraction(0))
    if op == "Lz":
        return (Fraction(0), m)
    if op == "X3":
        return (Fraction(0), n)
    if op == "xL":
        return (Fraction(0), constraint_sign() * n)
    raise ValueError(f"unknown operator {op}")


@dataclass(frozen=True)
class EigenReport:
    operator: str
    eigenvalue: complex
    residual: float
    exact: bool
    labels: tuple = ()

    @property
    def passed(self) -> bool:
        return self.residual == 0.0 if self.exact else self.residual <= 1e-10

    def row(self) -> dict:
        j, n, m = (self.labels + (None, None, None))[:3]
        return {"operator": self.operator, "j": _fmt(j), "n": _fmt(n), "m": _fmt(m),
                "eigenvalue": _fmt_complex(self.eigenvalue), "residual": repr(float(self.residual))}


def _fmt(x):
    return "" if x is None else str(x)


def _fmt_complex(z: complex) -> str:
    return f"{z.real!r}{z.imag:+}i"


def eigen_check(psi, op: str, j=None, n=None, m=None, eigenvalue=None) -> EigenReport:
    """Residual of ``(Op - lambda) psi`` with ``lambda`` read from the labels (or given)."""
    if eigenvalue is None:
        lam = expected_eigenvalue(op, j, n, m)
    else:
        lam = S.coerce(eigenvalue)
    image = _apply_operator(op, psi)
    if isinstance(psi, DifferentialForm):
        diff = (image - psi.scale(lam)).normal_form()
        coeffs = list(diff.components.values())
        exact = all(c.exact for c in psi.components.values())
    else:
        diff = (image - psi.scale(lam)).normal_form()
        coeffs = [diff]
        exact = psi.exact
    residual = max((c.max_abs() for c in coeffs), default=0.0)
    labels = tuple(x for x in (j, n, m))
    return EigenReport(op, complex(float(lam[0]), float(lam[1])), residual, exact, labels)


# ---------------------------------------------------------------------------
# Wigner functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class WignerBasisElement:
    """Exact polynomial ``poly`` with ``norm * poly`` of Haar mean square ``1/(2j+1)``."""

    j: Fraction
    n: Fraction
    m: Fraction
    poly: Polynomial
    norm: float

    def normalized(self) -> Polynomial:
        return self.poly.scale(self.norm)

    def mean_square(self) -> Fraction:
        """Exact Haar integral of ``|poly|^2`` (total mass 1)."""
        return S.to_fraction(haar_integral(self.poly.conjugate() * self.poly).re)


def _half_steps(j: Fraction):
    return [j - k for k in range(int(2 * j) + 1)]


def wigner_basis(j) -> list:
    """All ``(2j+1)^2`` polynomials ``N_-^(j-n) J_-^(j-m) ub^(2j)`` ordered by ``(n, m)`` descending."""
    j = half_integer(j)
    if j < 0:
        raise ValueError("j must be non-negative")
    ring = SU2
    Jm, Nm = lowering_m(ring), lowering_n(ring)
    top = ring.monomial(1, ub=int(2 * j))
    out = []
    row = top
    for n in _half_steps(j):
        p = row
        for m in _half_steps(j):
            ms = S.to_fraction(haar_integral(p.conjugate() * p).re)
            norm = math.sqrt(1.0 / ((2 * j + 1) * ms))
            out.append(WignerBasisElement(j, n, m, p, norm))
            p = Jm(p)
        row = Nm(row)
    return out


def equivariant_subspace(elements: Sequence[WignerBasisElement], n) -> list:
    """Elements with ``X_3 psi = i n psi`` (measured, not read from labels)."""
    n = half_integer(n)
    X, _, _ = _fields(SU2)
    keep = []
    for e in elements:
        image = X[2](e.poly)
        if image == e.poly.scale((0, n)):
            keep.append(e)
    return keep


# ---------------------------------------------------------------------------
# exact surd prefactors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Surd:
    """``phase * sqrt(square) * pi**pi_power`` with ``phase`` in {1, -1, i, -i}."""

    phase: tuple = (1, 0)
    square: Fraction = Fraction(1)
    pi_power: Fraction = Fraction(0)

    def __mul__(self, other: "Surd") -> "Surd":
        a, b = self.phase, other.phase
        phase = (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])
        return Surd(phase, self.square * other.square, self.pi_power + other.pi_power)

    def value(self) -> complex:
        mag = math.sqrt(self.square) * math.pi ** float(self.pi_power)
        return complex(self.phase[0], self.phase[1]) * mag

    def ratio(self, other: "Surd"):
        """Exact Gaussian ``self / other`` if it is rational, else None."""
        if self.pi_power != other.pi_power or other.square == 0:
            return None
        root = S.sqrt_rational(self.square / other.square)
        if root is None:
            return None
        a, b = self.phase, other.phase
        # b is a unit, so 1/b = conj(b)
        ph = (a[0] * b[0] + a[1] * b[1], a[1] * b[0] - a[0] * b[1])
        r = S.to_fraction(root)
        return (ph[0] * r, ph[1] * r)

    def __str__(self):
        ph = {(1, 0): "", (-1, 0): "-", (0, 1): "i*", (0, -1): "-i*"}[tuple(self.phase)]
        pi = "" if self.pi_power == 0 else f"*pi^({self.pi_power})"
        return f"{ph}sqrt({self.square}){pi}"


def signed_sqrt(sign: int, square: Fraction) -> Surd:
    return Surd((sign, 0), Fraction(square))


@dataclass(frozen=True, eq=False)
class ScaledForm:
    """``factor * form`` with ``form`` exact and the irrational ``factor`` kept symbolic."""

    form: DifferentialForm
    factor: Surd
    label: str = ""
    j: Fraction | None = None
    m: Fraction | None = None

    def mean_square(self):
        """Exact Haar mean of ``(form|form)`` (total mass 1; the factor excluded)."""
        return haar_integral(self.form.pointwise_inner(self.form)).re

    def norm_squared(self, volume: float | None = None) -> float:
        vol = haar_volume() if volume is None else volume
        return abs(self.factor.value()) ** 2 * float(self.mean_square()) * vol

    def derived_volume(self) -> float:
        """Volume making this element unit-norm."""
        return 1.0 / (abs(self.factor.value()) ** 2 * float(self.mean_square()))


@dataclass(frozen=True, eq=False)
class ScaledPoly:
    poly: Polynomial
    factor: Surd
    label: str = ""
    l: Fraction | None = None
    m: Fraction | None = None


# ---------------------------------------------------------------------------
# horizontal forms on SU(2)
# ---------------------------------------------------------------------------

def killing_manifold():
    return _killing()


@lru_cache(maxsize=None)
def _killing():
    return su2_killing()


def theta_plus_scaled(M=None) -> DifferentialForm:
    """``sqrt(2) theta^+ = theta^1 - i theta^2``."""
    M = M or _killing()
    return DifferentialForm(M, {(0,): M.ring.one(), (1,): M.ring.const((0, -1))})


def theta_minus_scaled(M=None) -> DifferentialForm:
    """``sqrt(2) theta^- = theta^1 + i theta^2``."""
    M = M or _killing()
    return DifferentialForm(M, {(0,): M.ring.one(), (1,): M.ring.const((0, 1))})


@dataclass(frozen=True)
class HorizontalityReport:
    horizontal: bool        # i_{X_3} alpha = 0
    invariant: bool         # L_{X_3} alpha = 0
    charge: Fraction | None  # n with L_{X_3} alpha = i n alpha, if alpha is an eigenform

    def __bool__(self):
        return self.horizontal and self.invariant


def horizontal_forms_check(alpha: DifferentialForm) -> HorizontalityReport:
    M = alpha.manifold
    X3 = frame_field(M, M.dim - 1)
    horizontal = alpha.contract(X3).normal_form().is_zero()
    lie = alpha.lie_derivative(X3).normal_form()
    invariant = lie.is_zero()
    charge = None
    if invariant:
        charge = Fraction(0)
    elif not alpha.is_zero():
        I, c = next(iter(alpha.normal_form().components.items()))
        lc = lie.coefficient(*I)
        # guess the ratio from one monomial and verify globally
        mono, coef = next(iter(c.terms.items()))
        lt = lc.terms.get(mono)
        if lt is not None and S.is_exact_pair(coef):
            r = S.pair_mul(lt, S.pair_inv(coef))
            if r[0] == 0 and lie == alpha.normal_form().scale(r):
                charge = S.to_fraction(r[1])
    return HorizontalityReport(horizontal, invariant, charge)


def _one_forms():
    M = _killing()
    du, dv = exact_differential(M, "u"), exact_differential(M, "v")
    dub, dvb = exact_differential(M, "ub"), exact_differential(M, "vb")
    u, ub, v, vb = M.ring.vars("u", "ub", "v", "vb")
    eta = du.scale(-v) + dv.scale(u)          # u dv - v du
    omega = dub.scale(vb) - dvb.scale(ub)     # vb dub - ub dvb
    return M, (u, ub, v, vb), omega, eta


def j1_basis() -> list:
    """Integer-spin basis ``alpha_1, alpha_0, alpha_-1`` built from ``u dv - v du`` and its conjugate."""
    M, (u, ub, v, vb), omega, eta = _one_forms()
    out = []
    rows = [
        (1, omega.scale(v * v) + eta.scale(ub * ub), Fraction(3, 8)),
        (0, omega.scale(-(v * u)) + eta.scale(vb * ub), Fraction(3, 4)),
        (-1, omega.scale(u * u) + eta.scale(vb * vb), Fraction(3, 8)),
    ]
    for m, form, sq in rows:
        factor = Surd((0, 1), sq, Fraction(-1))   # i / sqrt(pi) * sqrt(sq / pi)
        out.append(ScaledForm(form.normal_form(), factor, f"alpha_{m}", Fraction(1), Fraction(m)))
    return out


def half_basis() -> list:
    """``alpha_{1/2} = v theta^+ / (2 pi)``, ``alpha_{-1/2} = -u theta^+ / (2 pi)``."""
    M = _killing()
    u, v = M.ring.vars("u", "v")
    tp = theta_plus_scaled(M)
    factor = Surd((1, 0), Fraction(1, 8), Fraction(-1))   # 1/(2 pi sqrt 2)
    return [
        ScaledForm(tp.scale(v), factor, "alpha_1/2", Fraction(1, 2), Fraction(1, 2)),
        ScaledForm(tp.scale(-u), factor, "alpha_-1/2", Fraction(1, 2), Fraction(-1, 2)),
    ]


def spherical_harmonics(l) -> dict:
    """``Y_l^m`` as ``factor * poly`` in ``u, ub, v, vb`` (functions of the Hopf coordinates).

    Condon-Shortley phases: ``Y_l^l`` is ``(-1)^l`` times a positive multiple of
    ``(ub v)^l`` and lower states follow from ``J_-``.  Normalized so that the
    integral over the sphere is 1, i.e. Haar mean square ``1/(4 pi)``.
    """
    l = half_integer(l)
    if l.denominator != 1 or l < 0:
        raise ValueError("spherical harmonics need a non-negative integer l")
    ring = SU2
    Jm = lowering_m(ring)
    p = ring.monomial(-1 if l % 2 else 1, ub=int(l), v=int(l))
    out = {}
    for m in _half_steps(l):
        ms = S.to_fraction(haar_integral(p.conjugate() * p).re)
        out[m] = ScaledPoly(p, Surd((1, 0), 1 / (4 * ms), Fraction(-1, 2)), f"Y_{l}^{m}", l, m)
        p = Jm(p)
    return out


# ---------------------------------------------------------------------------
# Clebsch-Gordan
# ---------------------------------------------------------------------------

def _fact(x: Fraction) -> int:
    if x.denominator != 1 or x < 0:
        raise ValueError("factorial of non-natural number")
    return math.factorial(int(x))


def clebsch_gordan_signed_square(j1, j2, m1, m2, j, m) -> tuple:
    """``(sign, square)`` with ``<j1 m1; j2 m2 | j m> = sign * sqrt(square)`` (Racah formula, exact)."""
    j1, j2, m1, m2, j, m = (half_integer(x) for x in (j1, j2, m1, m2, j, m))
    if m1 + m2 != m or not (abs(j1 - j2) <= j <= j1 + j2) or (j1 + j2 + j).denominator != 1:
        return 0, Fraction(0)
    if abs(m1) > j1 or abs(m2) > j2 or abs(m) > j:
        return 0, Fraction(0)
    for a, b in ((j1, m1), (j2, m2), (j, m)):
        if (a - b).denominator != 1:
            return 0, Fraction(0)
    pre = Fraction((2 * j + 1).numerator * _fact(j1 + j2 - j) * _fact(j1 - j2 + j) * _fact(-j1 + j2 + j),
                   _fact(j1 + j2 + j + 1))
    pre *= (_fact(j1 + m1) * _fact(j1 - m1) * _fact(j2 + m2) * _fact(j2 - m2)
            * _fact(j + m) * _fact(j - m))
    total = Fraction(0)
    k = 0
    while True:
        args = [j1 + j2 - j - k, j1 - m1 - k, j2 + m2 - k, j - j2 + m1 + k, j - j1 - m2 + k]
        if args[0] < 0 or args[1] < 0 or args[2] < 0:
            break
        if args[3] >= 0 and args[4] >= 0:
            den = _fact(Fraction(k))
            for x in args:
                den *= _fact(x)
            total += Fraction((-1) ** k, den)
        k += 1
    if total == 0:
        return 0, Fraction(0)
    return (1 if total > 0 else -1), pre * total * total


def clebsch_gordan(j1, j2, m1, m2, j, m) -> float:
    sign, sq = clebsch_gordan_signed_square(j1, j2, m1, m2, j, m)
    return sign * math.sqrt(sq)


def cg_combine(harmonics: dict, forms: Sequence[ScaledForm], j_target, l=None) -> dict:
    """``sum CG(l, 1/2; m1, m2 | J, M) Y_l^{m1} alpha_{m2}`` for every ``M``.

    ``harmonics`` maps ``m1`` to :class:`ScaledPoly`; ``forms`` carry their own
    ``(j, m)``.  The common irrational factor is pulled out so the form stays
    exact whenever the relative coefficients are rational.
    """
    j_target = half_integer(j_target)
    any_y = next(iter(harmonics.values()))
    l = any_y.l if l is None else half_integer(l)
    s = forms[0].j
    if not (abs(l - s) <= j_target <= l + s):
        raise ValueError(f"j={j_target} does not occur in {l} x {s}")
    out = {}
    for M in _half_steps(j_target):
        terms = []
        for f in forms:
            m1 = M - f.m
            if m1 not in harmonics:
                continue
            sign, sq = clebsch_gordan_signed_square(l, s, m1, f.m, j_target, M)
            if sign == 0:
                continue
            Y = harmonics[m1]
            terms.append((Y.factor * f.factor * signed_sqrt(sign, sq), Y.poly, f.form))
        ref = terms[0][0]
        total = None
        exact = all(t[0].ratio(ref) is not None for t in terms)
        for surd, poly, form in terms:
            coef = surd.ratio(ref) if exact else surd.value() / ref.value()
            piece = form.scale(poly).scale(coef)
            total = piece if total is None else total + piece
        out[M] = ScaledForm(total.normal_form(), ref, f"alpha^{j_target}_{M}", j_target, M)
    return out


def reference_towers() -> dict:
    """The CG towers for ``j = 3/2`` and ``j = 1/2`` with the index layout of the reference table.

    Each entry is a list of ``(sign, square, m_Y, m_alpha)`` terms.
    """
    return {key: list(terms) for key, terms in TOWERS_REFERENCE.items()}


def assemble_tower(terms, harmonics: dict, forms: dict) -> DifferentialForm:
    """Exact-up-to-float combination ``sum sign sqrt(sq) Y_{mY} alpha_{ma}`` (float coefficients)."""
    total = None
    for sign, sq, mY, ma in terms:
        Y, a = harmonics[Fraction(mY)], forms[Fraction(ma)]
        coef = (Y.factor * a.factor * signed_sqrt(sign, sq)).value()
        piece = a.form.scale(Y.poly).scale(coef)
        total = piece if total is None else total + piece
    return total.normal_form()


# ---------------------------------------------------------------------------
# reduced Hamiltonian on R^4_0
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ReducedHamiltonianReport:
    result: Polynomial
    expected: Polynomial
    matches: bool
    first_order_coefficient: Polynomial
    angular_coefficient: Polynomial | None
    shift: Polynomial | None


def _lift_r(p: Polynomial) -> Polynomial:
    return SU2R.embed(p) if p.ring is not SU2R else p


def reduced_hamiltonian_apply(psi: Polynomial, k=1, n=0, j=None) -> ReducedHamiltonianReport:
    """Hodge Laplacian of ``psi`` on ``R^4_0(k)`` compared with its reduced radial form.

    With ``X_3 psi = i n psi`` the non-negative Laplacian is
    ``-[d_r^2 + (2/r) d_r + (sum L_a^2 + n^2)/r^2 - n^2/k]``.  When ``j`` is
    given and ``psi`` does not depend on ``r``, the report carries the
    angular eigen-coefficient and its ``k``-dependent part.
    """
    psi = _lift_r(psi)
    n = half_integer(n)
    M = r4_monopole(k)
    ring = M.ring
    X = M.frame_actions[1:]
    if X[2](psi).normal_form() != psi.scale((0, n)).normal_form():
        raise ValueError("psi is not equivariant with the given n")
    lap = DifferentialForm.function(M, psi).laplace_beltrami().coefficient().normal_form()
    Dr = radial_derivation(ring)
    _, L, _ = _fields(ring)
    cas = ring.zero()
    for La in L:
        cas = cas + La(La(psi))
    kq = M.metric_diag[3]
    n2 = ring.const(n * n)
    rinv = ring.monomial(1, r=-1)
    expected = -(Dr(Dr(psi)) + rinv.scale(2) * Dr(psi) + rinv * rinv * (cas + n2 * psi) - n2 * kq.inverse() * psi)
    expected = expected.normal_form()
    matches = lap == expected if lap.exact and expected.exact else lap.close_to(expected, 1e-12)
    # first-order coefficient from the action on r: Delta r = -c / r
    r = ring.var("r")
    lap_r = DifferentialForm.function(M, r).laplace_beltrami().coefficient()
    first = -(lap_r * r)
    angular = shift = None
    if j is not None and psi.degree_in(["r"]) == 0 and all(m[ring.index["r"]] == 0 for m in psi.terms):
        j = half_integer(j)
        angular = _ratio(lap, psi.normal_form())
        if angular is not None:
            base = rinv * rinv * ring.const(j * (j + 1) - n * n)
            shift = angular - base
    return ReducedHamiltonianReport(lap, expected, matches, first, angular, shift)


def _ratio(a: Polynomial, b: Polynomial) -> Polynomial | None:
    """``a / b`` when ``a = c b`` with ``c`` a Laurent polynomial in ``r`` alone."""
    if b.is_zero():
        return None
    ring = b.ring
    ir = ring.index["r"]
    # group both by angular monomial
    def split(p):
        out = {}
        for mono, c in p.terms.items():
            ang = mono[:ir] + (0,) + mono[ir + 1:]
            out.setdefault(ang, {})[mono[ir]] = c
        return out
    sa, sb = split(a), split(b)
    ang, bpart = next(iter(sb.items()))
    if len(bpart) != 1:
        return None
    (eb, cb), = bpart.items()
    apart = sa.get(ang, {})
    inv = S.pair_inv(cb)
    terms = {}
    for ea, ca in apart.items():
        mono = [0] * ring.nvars
        mono[ir] = ea - eb
        terms[tuple(mono)] = S.pair_mul(ca, inv if S.is_exact_pair(ca) else S.to_float_pair(inv))
    c = ring.from_terms(terms)
    return c if (c * b).normal_form() == a.normal_form() else None


# ---------------------------------------------------------------------------
# radial equation
# ---------------------------------------------------------------------------

class UnsupportedSector(ValueError):
    pass


@dataclass(frozen=True)
class RadialCase:
    l: Fraction
    n: Fraction
    mass: float = 1.0
    k_wave: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "l", half_integer(self.l))
        object.__setattr__(self, "n", half_integer(self.n))
        if self.mass <= 0:
            raise ValueError("mass must be positive")
        if abs(self.n) > self.l + Fraction(1, 2):
            raise UnsupportedSector(f"|n| = {abs(self.n)} exceeds l + 1/2: imaginary Bessel order")

    @property
    def mu_squared(self) -> Fraction:
        return (self.l + Fraction(1, 2)) ** 2 - self.n ** 2

    @property
    def mu(self) -> float:
        return math.sqrt(self.mu_squared)

    @classmethod
    def from_energy(cls, l, n, energy: float, mass: float = 1.0) -> "RadialCase":
        """``k_wave = sqrt(2 m E)``; ``E <= 0`` gives a case without a solution."""
        k = math.sqrt(2 * mass * energy) if energy > 0 else 0.0
        return cls(l, n, mass, k)

    @property
    def energy(self) -> float:
        return self.k_wave ** 2 / (2 * self.mass)

    @property
    def has_solution(self) -> bool:
        return self.k_wave > 0


@dataclass(frozen=True)
class RadialReport:
    case: RadialCase
    mu: float
    has_solution: bool
    max_residual: float
    grid_points: int
    residuals: np.ndarray = field(repr=False, default=None)
    grid: np.ndarray = field(repr=False, default=None)


def make_grid(start: float, stop: float, step: float) -> np.ndarray:
    if step <= 0 or stop <= start:
        raise ValueError("grid must be strictly increasing")
    count = int(round((stop - start) / step))
    return start + step * np.arange(count + 1)


def radial_solution(case: RadialCase, r: np.ndarray) -> np.ndarray:
    """``u(r) = sqrt(r) J_mu(k r)``."""
    return np.sqrt(r) * jv(case.mu, case.k_wave * r)


def radial_residual(case: RadialCase, grid: np.ndarray) -> RadialReport:
    """Fourth-order finite-difference residual of the reduced radial equation, relative to ``max|u|``.

    The operator is ``-u''/(2m) + (l(l+1) - n^2) u / (2 m r^2) - E u``.
    """
    grid = np.asarray(grid, dtype=float)
    if not case.has_solution:
        return RadialReport(case, case.mu, False, math.nan, len(grid))
    if grid[0] <= 0:
        raise ValueError("grid must stay away from r = 0")
    h = float(np.min(np.diff(grid))) if len(grid) > 1 else 1e-3
    if not np.allclose(np.diff(grid), h, rtol=1e-9, atol=0):
        raise ValueError("grid must be uniform")
    if grid[0] - 2 * h <= 0:
        raise ValueError("grid too close to r = 0 for the stencil")
    ext = np.concatenate([grid[0] - h * np.array([2.0, 1.0]), grid, grid[-1] + h * np.array([1.0, 2.0])])
    u = radial_solution(case, ext)
    d2 = (-u[4:] + 16 * u[3:-1] - 30 * u[2:-2] + 16 * u[1:-3] - u[:-4]) / (12 * h * h)
    uc = u[2:-2]
    c = float(case.l * (case.l + 1) - case.n ** 2)
    m = case.mass
    res = -d2 / (2 * m) + c * uc / (2 * m * grid ** 2) - case.energy * uc
    scale = float(np.max(np.abs(uc)))
    rel = np.abs(res) / scale
    return RadialReport(case, case.mu, True, float(np.max(rel)), len(grid), rel, grid)
