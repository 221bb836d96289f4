"""Kahler (Clifford) product on forms, algebraic spinors and Dirac matrices.

For a diagonal metric the product reads

    phi v psi = sum_s (-1)^(s(s-1)/2) sum_{|A|=s} prod_{a in A} g^{aa}
                (gamma^s i_A phi) ^ (i_A psi)

with ``gamma`` the degree involution and ``i_A`` the iterated contraction.
It is evaluated once per pair of basis blades and extended bilinearly.

Scalars: the projector family ``1/2 + rho dx + xi dx^dy`` needs ``rho`` with
``rho^2 = xi^2 + 1/4``.  :func:`clifford_ring` builds a coefficient ring over
``x, y, z`` where ``rho`` (and optionally ``xi``) are symbols constrained by
that relation, so every identity below is checked exactly.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from . import _scalar as S
from . import linalg
from .exterior import DifferentialForm, ManifoldMismatch, merge_sign
from .frames import FrameManifold, euclidean_r3
from .polyring import R3, PolyRing, Polynomial


# ---------------------------------------------------------------------------
# coefficient rings
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CliffordScalars:
    """Coefficient ring for the projector family plus the values of ``rho`` and ``xi`` in it."""

    ring: PolyRing
    rho: Polynomial
    xi: Polynomial
    xi_value: object = None


_RINGS: dict = {}


def _exact_xi(xi):
    if isinstance(xi, float):
        # decimal literal, not the binary expansion
        xi = Fraction(repr(xi))
    q = S.rational(xi)
    if q < 0:
        raise ValueError("xi must be non-negative")
    return q


def clifford_ring(xi=None) -> CliffordScalars:
    """Ring over ``x, y, z`` for a given ``xi`` (or symbolic ``xi`` when None).

    ``rho = +sqrt(xi^2 + 1/4)`` is a plain rational when that is a perfect
    square, otherwise a symbol with the eager relation ``rho^2 -> xi^2 + 1/4``.
    """
    key = "generic" if xi is None else _exact_xi(xi)
    if key in _RINGS:
        return _RINGS[key]
    quarter = S.rational("1/4")
    if xi is None:
        ring = PolyRing(["x", "y", "z", "rho", "xi"], label="R3[rho,xi]")
        xs = ring.var("xi")
        ring.add_relation({"rho": 2}, xs * xs + ring.const(quarter), eager=True)
        out = CliffordScalars(ring, ring.var("rho"), xs)
    else:
        d = key * key + quarter
        root = S.sqrt_rational(d)
        if root is not None:
            ring = PolyRing(["x", "y", "z"], label=f"R3[xi={key}]")
            out = CliffordScalars(ring, ring.const(root), ring.const(key), key)
        else:
            ring = PolyRing(["x", "y", "z", "rho"], label=f"R3[rho^2={d}]")
            ring.add_relation({"rho": 2}, ring.const(d), eager=True)
            out = CliffordScalars(ring, ring.var("rho"), ring.const(key), key)
    _RINGS[key] = out
    return out


_R3_MANIFOLDS: dict = {}


def r3_over(ring: PolyRing) -> FrameManifold:
    """Euclidean R^3 with coefficients in ``ring`` (one shared instance per ring)."""
    if id(ring) not in _R3_MANIFOLDS:
        _R3_MANIFOLDS[id(ring)] = (ring, euclidean_r3(ring))
    return _R3_MANIFOLDS[id(ring)][1]


# ---------------------------------------------------------------------------
# the product
# ---------------------------------------------------------------------------

class CliffordContext:
    """Clifford product on the forms of a manifold with diagonal metric."""

    def __init__(self, manifold: FrameManifold):
        self.manifold = manifold
        self.inverse_metric_diag = tuple(g.inverse() for g in manifold.metric_diag)
        self._table: dict = {}

    def _blade(self, I: tuple) -> DifferentialForm:
        return DifferentialForm(self.manifold, {I: self.manifold.ring.one()})

    def blade_product(self, I: tuple, J: tuple) -> DifferentialForm:
        """``theta^I v theta^J`` from the contraction-sum formula."""
        key = (I, J)
        if key in self._table:
            return self._table[key]
        M = self.manifold
        left, right = self._blade(I), self._blade(J)
        total = DifferentialForm.zero(M)
        for s in range(min(len(I), len(J)) + 1):
            sign = -1 if (s * (s - 1) // 2) % 2 else 1
            for A in combinations(sorted(set(I) & set(J)), s):
                lf, rf = left, right
                weight = M.ring.one()
                for a in reversed(A):
                    lf = lf.contract(a)
                    rf = rf.contract(a)
                    weight = weight * self.inverse_metric_diag[a]
                if s % 2:
                    lf = grade_involution(lf)
                term = lf.wedge(rf).scale(weight)
                total = total + (term if sign > 0 else -term)
        self._table[key] = total
        return total

    def vee(self, phi: DifferentialForm, psi: DifferentialForm) -> DifferentialForm:
        if phi.manifold is not self.manifold or psi.manifold is not self.manifold:
            raise ManifoldMismatch("forms must live on the context manifold")
        out: dict = {}
        for I, f in phi.components.items():
            for J, g in psi.components.items():
                fg = f * g
                for K, c in self.blade_product(I, J).components.items():
                    term = fg * c
                    out[K] = out[K] + term if K in out else term
        return DifferentialForm(self.manifold, out)

    def vee_all(self, *forms: DifferentialForm) -> DifferentialForm:
        result = forms[0]
        for f in forms[1:]:
            result = self.vee(result, f)
        return result

    def generator(self, a: int) -> DifferentialForm:
        return self._blade((a,))

    def volume_element(self) -> DifferentialForm:
        return self._blade(tuple(range(self.manifold.dim)))


def grade_involution(form: DifferentialForm) -> DifferentialForm:
    return DifferentialForm(form.manifold,
                            {I: (-f if len(I) % 2 else f) for I, f in form.components.items()})


def vee(phi: DifferentialForm, psi: DifferentialForm, ctx: CliffordContext | None = None) -> DifferentialForm:
    ctx = ctx or context_for(phi.manifold)
    return ctx.vee(phi, psi)


_CONTEXTS: dict = {}


def context_for(manifold: FrameManifold) -> CliffordContext:
    entry = _CONTEXTS.get(id(manifold))
    if entry is None or entry[0] is not manifold:
        entry = (manifold, CliffordContext(manifold))
        _CONTEXTS[id(manifold)] = entry
    return entry[1]


@dataclass(frozen=True)
class IdempotencyResult:
    idempotent: bool
    residual: float

    def __bool__(self):
        return self.idempotent


def is_idempotent(P: DifferentialForm, ctx: CliffordContext | None = None, tol: float = 0.0) -> IdempotencyResult:
    """Check ``P v P = P``; exact unless coefficients are floating."""
    ctx = ctx or context_for(P.manifold)
    diff = ctx.vee(P, P) - P
    residual = max((c.max_abs() for c in diff.components.values()), default=0.0)
    exact = all(c.exact for c in diff.components.values())
    ok = diff.is_zero() if exact and tol == 0.0 else residual <= tol
    return IdempotencyResult(ok, residual)


def covariant_constancy(P: DifferentialForm, ctx: CliffordContext | None = None) -> bool:
    """``P v d_a P = 0`` for every frame direction (flat connection)."""
    ctx = ctx or context_for(P.manifold)
    for E in P.manifold.frame_actions:
        dP = P.map_coefficients(E)
        if not ctx.vee(P, dP).is_zero():
            return False
    return True


def projector_family(xi=0, scalars: CliffordScalars | None = None) -> DifferentialForm:
    """``P(xi) = 1/2 + rho dx + xi dx^dy`` with ``rho = sqrt(xi^2 + 1/4) > 0``."""
    if scalars is None:
        scalars = clifford_ring(xi)
    M = r3_over(scalars.ring)
    half = scalars.ring.const(S.rational("1/2"))
    return DifferentialForm(M, {(): half, (0,): scalars.rho, (0, 1): scalars.xi})


# ---------------------------------------------------------------------------
# left ideals and their matrices
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class LeftIdeal:
    """Span of ``basis`` (left ideal generated by ``projector``).

    ``pivots`` are blades on which the basis restricts to an invertible
    matrix; coordinates are solved there and checked on all components.
    """

    projector: DifferentialForm
    basis: list
    pivots: list
    context: CliffordContext
    parameters: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def manifold(self) -> FrameManifold:
        return self.projector.manifold

    def _pivot_matrix(self):
        if not hasattr(self, "_pinv"):
            m = [[b.coefficient(*I) for b in self.basis] for I in self.pivots]
            self._pinv = linalg.adjugate_inverse(m)
        return self._pinv

    def coordinates(self, form: DifferentialForm) -> list:
        """Coefficients ``f_a`` with ``form = sum f_a basis[a]``; ``ValueError`` if not in the span."""
        rhs = [[form.coefficient(*I)] for I in self.pivots]
        coords = [row[0] for row in linalg.matmul(self._pivot_matrix(), rhs)]
        if not self.combine(coords) == form:
            raise ValueError("form is not in the ideal")
        return coords

    def contains(self, form: DifferentialForm) -> bool:
        try:
            self.coordinates(form)
            return True
        except ValueError:
            return False

    def combine(self, coords: Sequence[Polynomial]) -> DifferentialForm:
        out = DifferentialForm.zero(self.manifold)
        for f, b in zip(coords, self.basis):
            if not f.is_zero():
                out = out + b.scale(f)
        return out

    def left_matrix(self, element: DifferentialForm, label: str = "") -> "RepMatrix":
        """Matrix of ``element v`` on the basis (columns are images of basis elements)."""
        cols = [self.coordinates(self.context.vee(element, b)) for b in self.basis]
        rows = linalg.transpose(cols)
        return RepMatrix(label, rows, self)

    def to_json(self) -> dict:
        return {
            "projector": self.projector.to_json(),
            "basis": [b.to_json() for b in self.basis],
            "parameters": {k: str(v) for k, v in self.parameters.items()},
            "dim": self.dim,
        }


@dataclass(eq=False)
class RepMatrix:
    label: str
    matrix: list
    ideal: LeftIdeal | None = None

    def __matmul__(self, other: "RepMatrix") -> "RepMatrix":
        return RepMatrix(f"{self.label}{other.label}", linalg.matmul(self.matrix, other.matrix), self.ideal)

    def __eq__(self, other):
        m = other.matrix if isinstance(other, RepMatrix) else other
        return linalg.equal(self.matrix, m)

    def to_json(self) -> dict:
        return {"label": self.label, "matrix": [[str(x) for x in row] for row in self.matrix]}


def _blade_key(manifold: FrameManifold, label: str) -> tuple:
    if label in ("", "1"):
        return ()
    return tuple(sorted(manifold.labels.index(p) for p in label.split("^")))


def ideal_basis(P: DifferentialForm, ctx: CliffordContext | None = None, order: Sequence[str] | None = None,
                parameters: dict | None = None) -> LeftIdeal:
    """Basis of ``Lambda v P`` from blades ``e_I`` taken in ``order``.

    Each accepted element is ``e_I v P`` rescaled so that its ``e_I``
    component is 1 (that component is the scalar part of ``P``).
    """
    ctx = ctx or context_for(P.manifold)
    if not is_idempotent(P, ctx):
        raise ValueError("projector is not idempotent")
    M = P.manifold
    n = M.dim
    blades = [()] + [I for k in range(1, n + 1) for I in combinations(range(n), k)]
    if order is not None:
        preferred = [_blade_key(M, lab) for lab in order]
        blades = preferred + [I for I in blades if I not in preferred]
    scalar = P.coefficient()
    if scalar.is_zero():
        raise ValueError("projector has no scalar part")
    norm = scalar.inverse()
    basis, rows = [], []
    for I in blades:
        cand = ctx.vee(ctx._blade(I), P).scale(norm)
        if cand.is_zero():
            continue
        row = [cand.coefficient(*J) for J in blades]
        if linalg.rank(rows + [row]) > len(rows):
            rows.append(row)
            basis.append((I, cand))
    # pivot blades: the generating blades themselves when that block is invertible
    pivots = [I for I, _ in basis]
    block = [[b.coefficient(*J) for _, b in basis] for J in pivots]
    try:
        linalg.det(block).inverse()
    except ZeroDivisionError:
        red, piv = linalg.rref(linalg.transpose(rows))
        pivots = [blades[c] for c in piv]
    return LeftIdeal(P, [b for _, b in basis], pivots, ctx, parameters or {})


REAL_ORDER = ("1", "dy", "dy^dz", "dz")
COMPLEX_ORDER = ("1", "dx")


def spinor_ideal(xi=0, scalars: CliffordScalars | None = None) -> LeftIdeal:
    """The ideal of ``P(xi)`` with basis ``psi_a = 2 e_a v P`` for ``e = (1, dy, dy^dz, dz)``."""
    scalars = scalars or clifford_ring(xi)
    P = projector_family(scalars=scalars)
    ctx = context_for(P.manifold)
    params = {"rho": scalars.rho, "xi": scalars.xi}
    return ideal_basis(P, ctx, REAL_ORDER, params)


def generator_matrices(ideal: LeftIdeal) -> list:
    M = ideal.manifold
    return [ideal.left_matrix(ideal.context.generator(a), M.labels[a]) for a in range(M.dim)]


def volume_complex_structure(ideal: LeftIdeal) -> RepMatrix:
    """Matrix ``J`` of the volume element on the ideal; requires ``tau v tau = -1``."""
    ctx = ideal.context
    tau = ctx.volume_element()
    minus_one = DifferentialForm.function(ideal.manifold, -1)
    if ctx.vee(tau, tau) != minus_one:
        raise ValueError("volume element does not square to -1")
    return ideal.left_matrix(tau, "J")


@dataclass(eq=False)
class OperatorMatrix:
    """First-order matrix operator ``sum_c A_c d_c`` (``A_c`` keyed by coordinate)."""

    symbols: dict
    manifold: FrameManifold

    @property
    def size(self) -> int:
        return len(next(iter(self.symbols.values())))

    def entry(self, i: int, j: int) -> dict:
        return {c: m[i][j] for c, m in self.symbols.items() if not m[i][j].is_zero()}

    def apply(self, fs: Sequence[Polynomial]) -> list:
        ring = self.manifold.ring
        out = [ring.zero() for _ in range(self.size)]
        for c, m in self.symbols.items():
            E = self.manifold.frame_actions[self.manifold.labels.index("d" + c)]
            dfs = [E(f) for f in fs]
            for i in range(self.size):
                for j in range(self.size):
                    if not m[i][j].is_zero():
                        out[i] = out[i] + m[i][j] * dfs[j]
        return out

    def square(self) -> dict:
        """Second-order symbols ``{(c, c'): sym(A_c A_c')}`` (constant matrices commute with d)."""
        keys = sorted(self.symbols)
        out = {}
        for i, a in enumerate(keys):
            for b in keys[i:]:
                ab = linalg.matmul(self.symbols[a], self.symbols[b])
                if a != b:
                    ab = linalg.add(ab, linalg.matmul(self.symbols[b], self.symbols[a]))
                out[(a, b)] = ab
        return out

    def entry_str(self, i: int, j: int) -> str:
        parts = []
        for c, coef in self.entry(i, j).items():
            parts.append(f"({coef}) d{c}")
        return " + ".join(parts) or "0"

    def to_json(self) -> dict:
        return {"symbols": {f"d{c}": [[str(x) for x in row] for row in m] for c, m in sorted(self.symbols.items())}}


def dirac_matrix(ideal: LeftIdeal) -> OperatorMatrix:
    """``sum_c M^c d_c`` on coefficient tuples (``M^c`` the generator matrices).

    This is the action of ``d - delta = dx^c v d_c`` on ``sum f_a psi_a`` in a
    flat frame; it requires ``P v d_c P = 0``.
    """
    if not covariant_constancy(ideal.projector, ideal.context):
        raise ValueError("projector is not covariantly constant")
    M = ideal.manifold
    mats = generator_matrices(ideal)
    return OperatorMatrix({M.labels[a][1:]: mats[a].matrix for a in range(M.dim)}, M)


@dataclass(eq=False)
class ComplexReduction:
    """The Dirac operator on the ideal written over ``C`` via the basis ``{psi1, psi2, J psi1, J psi2}``."""

    generator_images: dict
    operator: OperatorMatrix
    change_of_basis: list


def _complex_block(m: list, ring: PolyRing) -> list:
    """``[[A, -B], [B, A]] -> A + iB``; raises if ``m`` does not commute with the canonical J."""
    n = len(m) // 2
    A = [row[:n] for row in m[:n]]
    B = [row[:n] for row in m[n:]]
    if not (linalg.equal([row[n:] for row in m[n:]], A)
            and linalg.equal([row[n:] for row in m[:n]], linalg.scale(B, -1))):
        raise ValueError("matrix is not complex-linear for J")
    i = ring.const((0, 1))
    return [[A[r][c] + i * B[r][c] for c in range(n)] for r in range(n)]


def complex_reduction(ideal: LeftIdeal, J: RepMatrix | None = None) -> ComplexReduction:
    J = J or volume_complex_structure(ideal)
    ring = ideal.manifold.ring
    n = ideal.dim // 2
    Jm = J.matrix
    ident = linalg.identity(ring, ideal.dim)
    if not linalg.equal(linalg.matmul(Jm, Jm), linalg.scale(ident, -1)):
        raise ValueError("J does not square to -1")
    # columns: psi_1..psi_n, J psi_1..J psi_n in psi coordinates
    cols = [ident[a] for a in range(n)] + [[Jm[r][a] for r in range(ideal.dim)] for a in range(n)]
    T = linalg.transpose(cols)
    Tinv = linalg.adjugate_inverse(T)
    mats = generator_matrices(ideal)
    images = {}
    for rm in mats:
        images[rm.label[1:]] = _complex_block(linalg.matmul(Tinv, linalg.matmul(rm.matrix, T)), ring)
    return ComplexReduction(images, OperatorMatrix(images, ideal.manifold), T)


def commutant_dimension(matrices: Sequence[list]) -> int:
    """Dimension over C of ``{X : X M = M X for all M}`` (1 means irreducible, by Schur)."""
    n = len(matrices[0])
    ring = matrices[0][0][0].ring
    rows = []
    for m in matrices:
        # (XM - MX)_{ij} = sum_k X_ik M_kj - M_ik X_kj ; unknown X_pq at index p*n+q
        for i in range(n):
            for j in range(n):
                row = [ring.zero() for _ in range(n * n)]
                for k in range(n):
                    row[i * n + k] = row[i * n + k] + m[k][j]
                    row[k * n + j] = row[k * n + j] - m[i][k]
                rows.append(row)
    return n * n - linalg.rank(rows)


def intertwiner(source: Sequence[list], target: Sequence[list]) -> list | None:
    """A matrix ``U`` with ``U S_c = T_c U`` for all c (unique up to scale if irreducible)."""
    n = len(source[0])
    ring = source[0][0][0].ring
    rows = []
    for s, t in zip(source, target):
        for i in range(n):
            for j in range(n):
                row = [ring.zero() for _ in range(n * n)]
                for k in range(n):
                    row[i * n + k] = row[i * n + k] + s[k][j]
                    row[k * n + j] = row[k * n + j] - t[i][k]
                rows.append(row)
    null = linalg.nullspace(rows, ring)
    if len(null) != 1:
        return None
    vec = null[0]
    return [[vec[i * n + j] for j in range(n)] for i in range(n)]


def pauli_matrices(ring: PolyRing) -> list:
    z, o = ring.zero(), ring.one()
    i = ring.const((0, 1))
    return [[[z, o], [o, z]], [[z, -i], [i, z]], [[o, z], [z, -o]]]


# ---------------------------------------------------------------------------
# complexified algebra
# ---------------------------------------------------------------------------

def complexified_projector(ring: PolyRing = R3) -> DifferentialForm:
    """``(1 + dz + i dx^dy + i dx^dy^dz) / 4``."""
    M = r3_over(ring)
    q = S.rational("1/4")
    return DifferentialForm(M, {(): ring.const(q), (2,): ring.const(q),
                                (0, 1): ring.const((0, q)), (0, 1, 2): ring.const((0, q))})


@dataclass(eq=False)
class ComplexifiedSpinors:
    ideal: LeftIdeal
    matrices: list
    dirac: OperatorMatrix


def complexified_idempotent(ring: PolyRing = R3) -> ComplexifiedSpinors:
    P = complexified_projector(ring)
    ctx = context_for(P.manifold)
    ideal = ideal_basis(P, ctx, COMPLEX_ORDER)
    mats = generator_matrices(ideal)
    return ComplexifiedSpinors(ideal, mats, dirac_matrix(ideal))


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


__all__ = [
    "CliffordContext", "CliffordScalars", "ComplexReduction", "ComplexifiedSpinors", "IdempotencyResult",
    "LeftIdeal", "OperatorMatrix", "RepMatrix", "clifford_ring", "commutant_dimension",
    "complex_reduction", "complexified_idempotent", "complexified_projector", "context_for",
    "covariant_constancy", "dirac_matrix", "generator_matrices", "grade_involution", "ideal_basis",
    "intertwiner", "is_idempotent", "merge_sign", "spinor_ideal", "pauli_matrices",
    "projector_family", "r3_over", "vee", "volume_complex_structure",
]
