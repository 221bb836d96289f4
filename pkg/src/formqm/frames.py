"""Parallelizable carrier manifolds described by a global frame.

Three carriers are provided: Euclidean R^3 with the coordinate frame, SU(2)
with its left-invariant frame and the bundle space R^4_0 = R_+ x SU(2) with
metric ``dr^2 + r^2 (th1^2 + th2^2) + k th3^2``.

SU(2) conventions: a point is ``s = [[u, -vb], [v, ub]]``.  The left-invariant
fields are ``X_a f(s) = d/dt f(s exp(t A_a))`` and the right-invariant ones
``L_a f(s) = d/dt f(exp(t A_a) s)`` with ``A_a = -i sigma_a / 2``.  Then
``[X_1, X_2] = X_3``, ``[L_1, L_2] = -L_3``, ``X_3 v = -(i/2) v``, and the
eigenvalue of a generator on a weight vector is ``i*m`` (anti-Hermitian
convention).  The Hermitian angular momentum is ``J_a = -i L_a``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Mapping, Sequence

from . import _scalar as S
from . import linalg
from .polyring import R3, SU2, SU2R, Derivation, PolyRing, Polynomial, haar_integral

I_UNIT = (0, 1)

# Pauli matrices as Gaussian-rational entries (re, im).
PAULI = (
    ((0, 1), (1, 0)),
    ((0, (0, -1)), ((0, 1), 0)),
    ((1, 0), (0, -1)),
)


def _gauss(x):
    return x if isinstance(x, tuple) else (x, 0)


def generator(a: int):
    """``A_a = -i sigma_a / 2`` as a 2x2 matrix of exact coefficient pairs (a = 1, 2, 3)."""
    from fractions import Fraction

    out = []
    for row in PAULI[a - 1]:
        new = []
        for x in row:
            re, im = _gauss(x)
            # (-i/2)(re + i im) = im/2 - i re/2
            new.append((Fraction(im) / 2, -Fraction(re) / 2))
        out.append(tuple(new))
    return tuple(out)


def group_point(ring: PolyRing) -> list:
    """The matrix ``s`` with polynomial entries in ``ring``."""
    u, ub, v, vb = ring.vars("u", "ub", "v", "vb")
    return [[u, -vb], [v, ub]]


def _const_matrix(ring: PolyRing, m) -> list:
    return [[ring.const(x) for x in row] for row in m]


def group_derivation(ring: PolyRing, A, side: str, label: str) -> Derivation:
    """Derivation generated by ``s -> s exp(tA)`` (side='right') or ``exp(tA) s`` (side='left')."""
    s = group_point(ring)
    Am = _const_matrix(ring, A)
    ds = linalg.matmul(s, Am) if side == "right" else linalg.matmul(Am, s)
    images = {"u": ds[0][0], "v": ds[1][0], "vb": -ds[0][1], "ub": ds[1][1]}
    if "r" in ring.index:
        images["r"] = ring.zero()
    return Derivation(ring, images, label)


def left_invariant_fields(ring: PolyRing = SU2) -> tuple:
    """``(X_1, X_2, X_3)``: generators of the right action, dual to the coframe theta^a."""
    return tuple(group_derivation(ring, generator(a), "right", f"X{a}") for a in (1, 2, 3))


def right_invariant_field(a: int, ring: PolyRing = SU2) -> Derivation:
    """``L_a``: generator of the left regular action; commutes with every ``X_b``."""
    if a not in (1, 2, 3):
        raise ValueError("axis must be 1, 2 or 3")
    return group_derivation(ring, generator(a), "left", f"L{a}")


def right_invariant_fields(ring: PolyRing = SU2) -> tuple:
    return tuple(right_invariant_field(a, ring) for a in (1, 2, 3))


def radial_derivation(ring: PolyRing = SU2R) -> Derivation:
    images = {n: ring.zero() for n in ring.names}
    images["r"] = ring.one()
    return Derivation(ring, images, "d_r")


def _trace(m) -> Polynomial:
    return m[0][0] + m[1][1]


def _dagger(ring: PolyRing, s) -> list:
    return [[s[j][i].conjugate() for j in range(2)] for i in range(2)]


def hopf_projection(ring: PolyRing = SU2) -> tuple:
    """Components ``x_i`` of ``s sigma_3 s^-1 = x_i sigma^i`` (``s^-1 = s^dagger`` on S^3)."""
    s = group_point(ring)
    sigma3 = _const_matrix(ring, PAULI[2])
    m = linalg.matmul(linalg.matmul(s, sigma3), _dagger(ring, s))
    half = S.rational("1/2")
    return tuple(_trace(linalg.matmul(m, _const_matrix(ring, PAULI[i]))).scale(half) for i in range(3))


def adjoint_coefficients(a: int, ring: PolyRing = SU2) -> tuple:
    """Functions ``R_b`` with ``L_a = sum_b R_b X_b`` (``R_b = i tr(s^-1 A_a s sigma_b)``)."""
    s = group_point(ring)
    m = linalg.matmul(linalg.matmul(_dagger(ring, s), _const_matrix(ring, generator(a))), s)
    return tuple(_trace(linalg.matmul(m, _const_matrix(ring, PAULI[b]))).scale(I_UNIT)
                 for b in range(3))


def structure_constants_from(fields: Sequence[Derivation]) -> list:
    """Solve ``[E_b, E_c] = c^a_{bc} E_a`` for constant ``c`` (raises if not a Lie algebra)."""
    ring = fields[0].ring
    n = len(fields)
    gens = [i for i, nm in enumerate(ring.names)]
    # linear system: unknowns c^a; one equation per (generator, monomial)
    keys = set()
    for f in fields:
        for i in gens:
            keys.update((i, m) for m in f.images.get(i, ring.zero()).terms)
    c = [[[S.ZERO] * n for _ in range(n)] for _ in range(n)]
    for b in range(n):
        for cc in range(b + 1, n):
            comm = fields[b].commutator(fields[cc])
            ckeys = set(keys)
            for i in gens:
                ckeys.update((i, m) for m in comm.images.get(i, ring.zero()).terms)
            ckeys = sorted(ckeys)
            A, rhs = [], []
            for i, m in ckeys:
                A.append([ring.const(f.images.get(i, ring.zero()).terms.get(m, (0, 0)))
                          for f in fields])
                rhs.append(ring.const(comm.images.get(i, ring.zero()).terms.get(m, (0, 0))))
            sol = linalg.solve(A, rhs)
            for a in range(n):
                val = sol[a].constant_term()
                if val.im != 0:
                    raise ValueError("structure constants are not real")
                c[a][b][cc] = val.re
                c[a][cc][b] = -val.re
    return c


@dataclass(frozen=True, eq=False)
class FrameManifold:
    """A manifold with a global frame ``E_a`` and dual coframe ``theta^a``.

    ``structure_constants[a][b][c]`` is ``c^a_{bc}`` with ``[E_b, E_c] = c^a_{bc} E_a``
    so ``d theta^a = -1/2 c^a_{bc} theta^b ^ theta^c``.  ``volume`` is the
    coefficient of the metric volume form on ``theta^1 ^ ... ^ theta^n``.
    """

    name: str
    labels: tuple
    structure_constants: tuple
    frame_actions: tuple
    metric_diag: tuple
    volume: Polynomial
    ring: PolyRing
    signature: str = "riemannian"
    integrator: Callable | None = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def inverse_metric(self, a: int) -> Polynomial:
        return self.metric_diag[a].inverse()

    def to_json(self) -> dict:
        consts = []
        for a, b, c in product(range(self.dim), repeat=3):
            val = self.structure_constants[a][b][c]
            if val != 0 and b < c:
                consts.append({"upper": self.labels[a], "lower": [self.labels[b], self.labels[c]],
                               "value": S.format_real(val)})
        return {
            "name": self.name,
            "dim": self.dim,
            "labels": list(self.labels),
            "structure_constants": consts,
            "metric_diag": {lab: str(g) for lab, g in zip(self.labels, self.metric_diag)},
            "volume": str(self.volume),
            "variables": list(self.ring.names),
            "signature": self.signature,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


def _zero_consts(n: int):
    return tuple(tuple(tuple(S.ZERO for _ in range(n)) for _ in range(n)) for _ in range(n))


def _freeze(c):
    return tuple(tuple(tuple(x for x in row) for row in mat) for mat in c)


def coordinate_derivations(ring: PolyRing, coords: Sequence[str]) -> tuple:
    out = []
    for name in coords:
        images = {n: ring.zero() for n in ring.names}
        images[name] = ring.one()
        out.append(Derivation(ring, images, f"d_{name}"))
    return tuple(out)


def euclidean_r3(ring: PolyRing = R3) -> FrameManifold:
    """R^3 with ``dx, dy, dz`` and the flat metric; ``ring`` may carry extra parameters."""
    return FrameManifold(
        name="R3",
        labels=("dx", "dy", "dz"),
        structure_constants=_zero_consts(3),
        frame_actions=coordinate_derivations(ring, ("x", "y", "z")),
        metric_diag=(ring.one(), ring.one(), ring.one()),
        volume=ring.one(),
        ring=ring,
    )


def su2_killing() -> FrameManifold:
    """SU(2) with the left-invariant coframe and the metric making it orthonormal."""
    fields = left_invariant_fields(SU2)
    consts = structure_constants_from(fields)
    return FrameManifold(
        name="SU2",
        labels=("th1", "th2", "th3"),
        structure_constants=_freeze(consts),
        frame_actions=fields,
        metric_diag=(SU2.one(), SU2.one(), SU2.one()),
        volume=SU2.one(),
        ring=SU2,
        integrator=haar_integral,
    )


def r4_monopole(k=1) -> FrameManifold:
    """R_+ x SU(2) with ``g = dr^2 + r^2 (th1^2 + th2^2) + k th3^2``.

    ``k`` is exact when given as int/Fraction/str; the volume coefficient
    ``sqrt(k) r^2`` falls back to floating point if ``sqrt(k)`` is irrational.
    """
    if isinstance(k, float):
        kq = k
        if k <= 0:
            raise ValueError("k must be positive")
        root = k ** 0.5
    else:
        kq = S.rational(k)
        if kq <= 0:
            raise ValueError("k must be positive")
        root = S.sqrt_rational(kq)
        if root is None:
            root = float(kq) ** 0.5
    ring = SU2R
    fields = left_invariant_fields(ring)
    su2c = structure_constants_from(fields)
    consts = [[[S.ZERO] * 4 for _ in range(4)] for _ in range(4)]
    for a, b, c in product(range(3), repeat=3):
        consts[a + 1][b + 1][c + 1] = su2c[a][b][c]
    r2 = ring.monomial(1, r=2)
    return FrameManifold(
        name=f"R4_0(k={S.format_real(kq)})",
        labels=("dr", "th1", "th2", "th3"),
        structure_constants=_freeze(consts),
        frame_actions=(radial_derivation(ring),) + fields,
        metric_diag=(ring.one(), r2, r2, ring.const(kq)),
        volume=r2.scale(root),
        ring=ring,
    )


@dataclass(frozen=True, eq=False)
class VectorField:
    """Vector field ``sum_a f^a E_a`` in the frame of ``manifold``."""

    manifold: FrameManifold
    components: tuple
    label: str = "X"

    def derivation(self) -> Derivation:
        ring = self.manifold.ring
        total = None
        for f, E in zip(self.components, self.manifold.frame_actions):
            if f.is_zero():
                continue
            term = E.times(f)
            total = term if total is None else total + term
        if total is None:
            total = Derivation(ring, {n: ring.zero() for n in ring.names}, self.label)
        total.label = self.label
        return total


def frame_field(manifold: FrameManifold, a: int) -> VectorField:
    ring = manifold.ring
    comps = tuple(ring.one() if b == a else ring.zero() for b in range(manifold.dim))
    return VectorField(manifold, comps, manifold.labels[a].replace("th", "X").replace("d", "d_", 1)
                       if manifold.labels[a].startswith("d") else f"X{a + 1}")


def right_invariant_vector(manifold: FrameManifold, a: int) -> VectorField:
    """``L_a`` expanded in the left-invariant frame of an SU(2)-type manifold."""
    ring = manifold.ring
    coeffs = adjoint_coefficients(a, ring)
    offset = manifold.dim - 3
    comps = tuple([ring.zero()] * offset) + coeffs
    return VectorField(manifold, comps, f"L{a}")


# ---------------------------------------------------------------------------
# Second-order operators, homogenization and principal symbols
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SecondOrderOperator:
    """``sum a_ij d_i d_j + sum b_i d_i + c`` over named coordinates."""

    coords: tuple
    a: Mapping
    b: Mapping
    c: Polynomial

    @property
    def ring(self) -> PolyRing:
        return self.c.ring

    def coeff2(self, i: str, j: str) -> Polynomial:
        return self.a.get((i, j), self.ring.zero())

    def coeff1(self, i: str) -> Polynomial:
        return self.b.get(i, self.ring.zero())

    def apply(self, f: Polynomial, partials: Mapping[str, Derivation]) -> Polynomial:
        out = self.c * f
        for (i, j), coef in self.a.items():
            if not coef.is_zero():
                out = out + coef * partials[i](partials[j](f))
        for i, coef in self.b.items():
            if not coef.is_zero():
                out = out + coef * partials[i](f)
        return out

    def equals(self, other: "SecondOrderOperator") -> bool:
        if set(self.coords) != set(other.coords):
            return False
        sa, sb = principal_symbol(self), principal_symbol(other)
        keys = set(sa) | set(sb)
        z = self.ring.zero()
        return (all(sa.get(k, z) == sb.get(k, z) for k in keys)
                and all(self.coeff1(i) == other.coeff1(i) for i in self.coords)
                and self.c == other.c)


def principal_symbol(op: SecondOrderOperator) -> dict:
    """Symmetrized second-order coefficients ``{(i, j): sigma_ij}`` (zero entries dropped)."""
    out = {}
    half = S.rational("1/2")
    for i in op.coords:
        for j in op.coords:
            val = (op.coeff2(i, j) + op.coeff2(j, i)).scale(half)
            if not val.is_zero():
                out[(i, j)] = val
    return out


def symbol_matrix(op: SecondOrderOperator) -> list:
    sym = principal_symbol(op)
    z = op.ring.zero()
    return [[sym.get((i, j), z) for j in op.coords] for i in op.coords]


def symbol_determinant(op: SecondOrderOperator) -> Polynomial:
    return linalg.det(symbol_matrix(op))


def schrodinger_operator(potential: Polynomial, time: str = "t", space=("x", "y", "z")) -> SecondOrderOperator:
    """``i d_t + sum d_x^2 - V``."""
    ring = potential.ring
    a = {(x, x): ring.one() for x in space}
    return SecondOrderOperator((time,) + tuple(space), a, {time: ring.const(I_UNIT)}, -potential)


def homogenize(op: SecondOrderOperator, fiber: str = "s", time: str = "t") -> SecondOrderOperator:
    """Trade the first/zero-order terms of a Schrodinger operator for a fiber coordinate.

    ``i d_t + Lap - V`` becomes ``d_s d_t + Lap + V d_s^2``.
    """
    ring = op.ring
    space = [x for x in op.coords if x != time]
    if time not in op.coords or fiber in op.coords:
        raise ValueError("operator is not of Schrodinger shape (time/fiber coordinates)")
    for (i, j), coef in op.a.items():
        expected = ring.one() if (i == j and i in space) else ring.zero()
        if coef != expected:
            raise ValueError("second-order part is not the flat Laplacian")
    for x in space:
        if op.coeff2(x, x) != ring.one():
            raise ValueError("second-order part is not the flat Laplacian")
    if op.coeff1(time) != ring.const(I_UNIT) or any(not op.coeff1(x).is_zero() for x in space):
        raise ValueError("first-order part is not i d_t")
    potential = -op.c
    half = ring.const(S.rational("1/2"))
    a = {(x, x): ring.one() for x in space}
    a[(fiber, time)] = half
    a[(time, fiber)] = half
    if not potential.is_zero():
        a[(fiber, fiber)] = potential
    return SecondOrderOperator((fiber, time) + tuple(space), a, {}, ring.zero())


def fiber_reduce(op: SecondOrderOperator, fiber: str = "s", charge: int = 1) -> SecondOrderOperator:
    """Restrict to functions ``exp(i*charge*s) psi``: replaces ``d_s`` by ``i*charge``."""
    ring = op.ring
    ik = ring.const((0, charge))
    coords = tuple(x for x in op.coords if x != fiber)
    a, b = {}, {}
    c = op.c
    for (i, j), coef in op.a.items():
        if i == fiber and j == fiber:
            c = c + coef * ik * ik
        elif i == fiber:
            b[j] = b.get(j, ring.zero()) + coef * ik
        elif j == fiber:
            b[i] = b.get(i, ring.zero()) + coef * ik
        else:
            a[(i, j)] = coef
    for i, coef in op.b.items():
        if i == fiber:
            c = c + coef * ik
        else:
            b[i] = b.get(i, ring.zero()) + coef
    return SecondOrderOperator(coords, a, {k: v for k, v in b.items() if not v.is_zero()}, c)


def frame_components(manifold: FrameManifold, Y: Derivation) -> tuple:
    """Components ``theta^a(Y)`` of a derivation in the frame of ``manifold``.

    Coordinate frames read them off the coordinate images; SU(2) directions use
    the Maurer-Cartan form ``s^-1 Y(s) = theta^a(Y) A_a``.
    """
    ring = manifold.ring
    out = []
    if "u" in ring.index:
        if "r" in ring.index:
            out.append(Y.image("r"))
        s = group_point(ring)
        ds = [[Y(x) for x in row] for row in s]
        m = linalg.matmul(_dagger(ring, s), ds)
        for b in range(3):
            out.append(_trace(linalg.matmul(m, _const_matrix(ring, PAULI[b]))).scale(I_UNIT).normal_form())
    else:
        names = [lab[1:] for lab in manifold.labels]
        out = [Y.image(n) for n in names]
    return tuple(out)
