"""Invariant suites behind ``formqm verify``.

Every check reports a residual and the tolerance it was judged against.
Exact checks carry tolerance 0 and pass only on exact equality; numeric
checks default to the frozen constants and follow ``--tol`` when given.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
import random
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable, Iterable

from . import _scalar as S
from . import clifford as C
from . import fixtures as FX
from . import linalg
from . import monopole as MP
from . import oracles
from .exterior import DifferentialForm
from .frames import euclidean_r3, frame_field, su2_killing
from .polyring import SU2, Polynomial, haar_integral
from .sampling import random_form, random_polynomial

SUITES = ("clifford", "hodge", "harmonics", "spectrum")


@dataclass(frozen=True)
class Check:
    id: str
    passed: bool
    residual: float
    tolerance: float
    detail: str = ""


@dataclass
class Report:
    suite: str
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {"suite": self.suite, "passed": self.passed,
                "checks": [_check_row(c) for c in self.checks]}

    def dumps(self, fmt: str = "json") -> str:
        if fmt == "json":
            return json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n"
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=["id", "passed", "residual", "tolerance", "detail"],
                                lineterminator="\n")
        writer.writeheader()
        for c in self.checks:
            writer.writerow(_check_row(c))
        return buf.getvalue()


def _num(x: float) -> str:
    return repr(float(x))


def _check_row(c: Check) -> dict:
    row = asdict(c)
    row["residual"] = _num(c.residual)
    row["tolerance"] = _num(c.tolerance)
    return row


def exact(cid: str, ok: bool, residual: float = None, detail: str = "") -> Check:
    if residual is None:
        residual = 0.0 if ok else 1.0
    return Check(cid, bool(ok), float(residual), 0.0, detail)


def numeric(cid: str, residual: float, tol: float, detail: str = "") -> Check:
    return Check(cid, bool(residual <= tol), float(residual), float(tol), detail)


def _poly_gap(a: Polynomial, b: Polynomial) -> float:
    return (a - b).normal_form().max_abs()


def _matrix_gap(a, b) -> float:
    return max((_poly_gap(x, y) for ra, rb in zip(a, b) for x, y in zip(ra, rb)), default=0.0)


def _form_gap(a: DifferentialForm, b: DifferentialForm) -> float:
    diff = (a - b).normal_form()
    return max((c.max_abs() for c in diff.components.values()), default=0.0)


def _matrix_check(cid: str, got, want) -> Check:
    ok = linalg.equal(got, want)
    return exact(cid, ok, 0.0 if ok else _matrix_gap(got, want))


def _form_check(cid: str, got: DifferentialForm, want: DifferentialForm) -> Check:
    ok = got == want
    return exact(cid, ok, 0.0 if ok else _form_gap(got, want))


# ---------------------------------------------------------------------------
# clifford
# ---------------------------------------------------------------------------

def _anticommutator_checks(M, label: str) -> list:
    ctx = C.context_for(M)
    worst = 0.0
    for a, b in itertools.product(range(M.dim), repeat=2):
        ga, gb = ctx.generator(a), ctx.generator(b)
        lhs = ctx.vee(ga, gb) + ctx.vee(gb, ga)
        want = DifferentialForm.function(M, M.inverse_metric(a).scale(2) if a == b else M.ring.zero())
        worst = max(worst, _form_gap(lhs, want))
    return [exact(f"clifford.generators.anticommutators.{label}", worst == 0.0, worst)]


def _ideal_fixture_checks(scalars, label: str) -> list:
    ideal = C.spinor_ideal(scalars=scalars)
    M = ideal.manifold
    out = []
    for a, (got, entries) in enumerate(zip(ideal.basis, FX.PSI_REAL), start=1):
        out.append(_form_check(f"clifford.basis.psi{a}.{label}", got, FX.form(entries, M, scalars)))
    for rm in C.generator_matrices(ideal):
        out.append(_matrix_check(f"clifford.generator.{rm.label}.{label}", rm.matrix,
                                 FX.matrix(FX.GENERATORS_REAL[rm.label], scalars)))
    return out


def _volume_checks(scalars) -> list:
    ideal = C.spinor_ideal(scalars=scalars)
    ring = scalars.ring
    J = C.volume_complex_structure(ideal)
    out = [_matrix_check("clifford.volume.J_matrix", J.matrix, FX.matrix(FX.VOLUME_J, scalars))]
    JJ = linalg.matmul(J.matrix, J.matrix)
    out.append(_matrix_check("clifford.volume.J_squared", JJ, linalg.scale(linalg.identity(ring, 4), -1)))
    ctx = ideal.context
    vol = ctx.volume_element()
    worst = 0.0
    for a, row in enumerate(FX.J_ON_BASIS):
        got = ctx.vee(vol, ideal.basis[a])
        want = DifferentialForm.zero(ideal.manifold)
        for b, entry in enumerate(row):
            want = want + ideal.basis[b].scale(FX.scalar(entry, scalars))
        worst = max(worst, _form_gap(got, want))
    out.append(exact("clifford.volume.J_on_basis", worst == 0.0, worst))
    return out


def _dirac_commutes_with_j(scalars, count: int = 50, seed: int = 7) -> list:
    ideal = C.spinor_ideal(scalars=scalars)
    ring = scalars.ring
    J = C.volume_complex_structure(ideal).matrix
    D = C.dirac_matrix(ideal)
    rng = random.Random(seed)
    worst = 0.0
    for _ in range(count):
        fs = [random_polynomial(ring, rng, ("x", "y", "z"), max_degree=3, terms=3) for _ in range(4)]
        Jf = [sum((J[i][k] * fs[k] for k in range(4)), ring.zero()) for i in range(4)]
        left = D.apply(Jf)
        Df = D.apply(fs)
        right = [sum((J[i][k] * Df[k] for k in range(4)), ring.zero()) for i in range(4)]
        worst = max([worst] + [_poly_gap(x, y) for x, y in zip(left, right)])
    out = [exact(f"clifford.volume.J_commutes_random_{count}", worst == 0.0, worst)]
    # the same statement on forms: d - delta of f_a J v psi_a against J v (d - delta)
    ctx = ideal.context
    vol = ctx.volume_element()
    worst = 0.0
    for _ in range(3):
        fs = [random_polynomial(ring, rng, ("x", "y", "z"), max_degree=2, terms=2) for _ in range(4)]
        psi = ideal.combine(fs)
        worst = max(worst, _form_gap(ctx.vee(vol, psi).dirac_kahler(), ctx.vee(vol, psi.dirac_kahler())))
        # D on coordinates reproduces d - delta on the ideal
        worst = max(worst, _form_gap(ideal.combine(D.apply(fs)), psi.dirac_kahler()))
    out.append(exact("clifford.volume.J_commutes_on_forms", worst == 0.0, worst))
    return out


def _dirac_checks(scalars) -> list:
    ideal = C.spinor_ideal(scalars=scalars)
    D = C.dirac_matrix(ideal)
    want = FX.operator_symbols(FX.DIRAC_REAL, scalars)
    out = [exact("clifford.dirac.real_matrix", all(linalg.equal(D.symbols[c], want[c]) for c in "xyz"),
                 max(_matrix_gap(D.symbols[c], want[c]) for c in "xyz"))]
    red = C.complex_reduction(ideal)
    want = FX.operator_symbols(FX.DIRAC_COMPLEX, scalars)
    out.append(exact("clifford.dirac.complex_matrix",
                     all(linalg.equal(red.generator_images[c], want[c]) for c in "xyz"),
                     max(_matrix_gap(red.generator_images[c], want[c]) for c in "xyz")))
    ref = {c: FX.matrix(FX.COMPLEX_IMAGES["d" + c], scalars) for c in "xyz"}
    out.append(exact("clifford.dirac.complex_images",
                     all(linalg.equal(red.generator_images[c], ref[c]) for c in "xyz")))
    ring = scalars.ring
    ident = linalg.identity(ring, 2)
    worst = 0.0
    for a, b in itertools.product("xyz", repeat=2):
        anti = linalg.add(linalg.matmul(ref[a], ref[b]), linalg.matmul(ref[b], ref[a]))
        want = linalg.scale(ident, 2) if a == b else linalg.zeros(ring, 2, 2)
        worst = max(worst, _matrix_gap(anti, want))
    out.append(exact("clifford.dirac.complex_clifford_relations", worst == 0.0, worst))
    dim = C.commutant_dimension([ref[c] for c in "xyz"])
    out.append(exact("clifford.dirac.complex_irreducible", dim == 1, abs(dim - 1), f"commutant dimension {dim}"))
    return out


def _pauli_equivalence() -> list:
    """At xi = 0 the 2x2 operator is unitarily equivalent to sigma^a d_a (phase +1)."""
    scalars = C.clifford_ring(0)
    ring = scalars.ring
    red = C.complex_reduction(C.spinor_ideal(scalars=scalars))
    src = [red.generator_images[c] for c in "xyz"]
    entry = {(0, 0): "dx", (0, 1): "dy - i*dz", (1, 0): "dy + i*dz", (1, 1): "-dx"}
    want = {(i, j): FX.operator_entry(e, scalars) for (i, j), e in entry.items()}
    got_ok = all(_poly_gap(src["xyz".index(c)][i][j], want[(i, j)].get(c, ring.zero())) == 0.0
                 for (i, j) in entry for c in "xyz")
    out = [exact("clifford.dirac.complex_xi0_entries", got_ok)]
    pauli = C.pauli_matrices(ring)
    U = C.intertwiner(src, pauli)
    ok = U is not None
    detail = ""
    if ok:
        Udag = [[U[j][i].conjugate() for j in range(2)] for i in range(2)]
        UU = linalg.matmul(Udag, U)
        c = UU[0][0]
        ok = (not linalg.det(U).is_zero()) and linalg.equal(UU, linalg.scale(linalg.identity(ring, 2), c))
        detail = f"U^dagger U = ({c}) Id"
    out.append(exact("clifford.dirac.unitary_equivalent_to_pauli", ok, detail=detail))
    return out


def _complexified_checks() -> list:
    spin = C.complexified_idempotent()
    ideal = spin.ideal
    M = ideal.manifold
    scalars = C.CliffordScalars(M.ring, M.ring.zero(), M.ring.zero())
    out = [exact("clifford.complex.idempotent", bool(C.is_idempotent(ideal.projector, ideal.context)))]
    out.append(_form_check("clifford.complex.projector", ideal.projector, FX.form(FX.COMPLEX_PROJECTOR, M, scalars)))
    for a, (got, entries) in enumerate(zip(ideal.basis, FX.PSI_COMPLEX), start=1):
        out.append(_form_check(f"clifford.complex.basis.psi{a}", got, FX.form(entries, M, scalars)))
    ctx = ideal.context
    worst = 0.0
    for g, s, coeff, t in FX.COMPLEX_IDENTITIES:
        gen = ctx.generator(M.labels.index(g))
        worst = max(worst, _form_gap(ctx.vee(gen, ideal.basis[s]), ideal.basis[t].scale(FX.scalar(coeff, scalars))))
    out.append(exact("clifford.complex.generator_identities", worst == 0.0, worst))
    for rm in spin.matrices:
        out.append(_matrix_check(f"clifford.complex.pauli.{rm.label}", rm.matrix,
                                 FX.matrix(FX.PAULI_REFERENCE[rm.label], scalars)))
    return out


def clifford_suite(tol: float | None = None, xi_values=(0, Fraction(1, 2), 1, Fraction(3, 2))) -> list:
    checks = []
    checks += _anticommutator_checks(euclidean_r3(), "r3")
    checks += _anticommutator_checks(su2_killing(), "su2")
    generic = C.clifford_ring(None)
    checks += _anticommutator_checks(C.r3_over(generic.ring), "generic")
    for xi in xi_values:
        res = C.is_idempotent(C.projector_family(xi))
        checks.append(exact(f"clifford.projector.idempotent.xi={xi}", res.idempotent, res.residual))
    res = C.is_idempotent(C.projector_family(scalars=generic))
    checks.append(exact("clifford.projector.idempotent.xi=generic", res.idempotent, res.residual))
    checks += _ideal_fixture_checks(generic, "generic")
    for xi in xi_values:
        checks += _ideal_fixture_checks(C.clifford_ring(xi), f"xi={xi}")
    # the dx matrix at xi = 0 is diag(1, -1, 1, -1)
    dx = C.generator_matrices(C.spinor_ideal(0))[0].matrix
    ring = dx[0][0].ring
    diag = [[ring.const((1 if i % 2 == 0 else -1) if i == j else 0) for j in range(4)] for i in range(4)]
    checks.append(_matrix_check("clifford.generator.dx.xi=0_diagonal", dx, diag))
    checks += _volume_checks(generic)
    checks += _dirac_commutes_with_j(generic)
    checks += _dirac_checks(generic)
    checks += _pauli_equivalence()
    checks += _complexified_checks()
    return checks


# ---------------------------------------------------------------------------
# hodge
# ---------------------------------------------------------------------------

_SU2_NAMES = ("u", "ub", "v", "vb")


def _hodge_table() -> list:
    M = euclidean_r3()
    out = []
    for src, dst in FX.HODGE_R3:
        got = DifferentialForm.from_labels(M, {src: 1}).hodge_star()
        out.append(_form_check(f"hodge.star_table({src})", got, DifferentialForm.from_labels(M, {dst: 1})))
    return out


def _operator_identities(M, label: str, names, count: int, seed: int, max_degree: int = 3) -> list:
    rng = random.Random(seed)
    worst = {"d2": 0.0, "delta2": 0.0, "laplacian": 0.0, "dirac_square": 0.0}
    for _ in range(count):
        a = random_form(M, rng, names=names, max_degree=max_degree)
        worst["d2"] = max(worst["d2"], _form_gap(a.d().d(), DifferentialForm.zero(M)))
        da, ca = a.d(), a.codifferential()
        worst["delta2"] = max(worst["delta2"], _form_gap(ca.codifferential(), DifferentialForm.zero(M)))
        lap = a.laplace_beltrami()
        s = da + ca
        worst["laplacian"] = max(worst["laplacian"], _form_gap(lap, (s.d() + s.codifferential())))
        D = a.dirac_kahler()
        worst["dirac_square"] = max(worst["dirac_square"], _form_gap(D.dirac_kahler(), -lap))
    names_out = {"d2": "d_squared_zero", "delta2": "delta_squared_zero",
                 "laplacian": "laplacian_is_(d+delta)^2", "dirac_square": "dirac_square_is_minus_laplacian"}
    return [exact(f"hodge.{label}.{names_out[k]}", v == 0.0, v) for k, v in worst.items()]


def _adjointness(count: int = 100, seed: int = 11) -> list:
    M = su2_killing()
    rng = random.Random(seed)
    worst = 0.0
    nontrivial = 0
    for _ in range(count):
        k = rng.randint(0, 2)
        alpha = random_form(M, rng, [k + 1], names=_SU2_NAMES, max_degree=6, density=1.0)
        beta = random_form(M, rng, [k], names=_SU2_NAMES, max_degree=6, density=1.0)
        lhs = alpha.l2_inner(beta.d())
        rhs = alpha.codifferential().l2_inner(beta)
        gap = abs(complex(lhs) - complex(rhs))
        if (lhs.re, lhs.im) != (rhs.re, rhs.im):
            worst = max(worst, gap if gap > 0 else 1.0)
        if complex(lhs) != 0:
            nontrivial += 1
    return [exact(f"hodge.su2.adjointness_random_{count}", worst == 0.0, worst, f"{nontrivial} nonzero pairings")]


def _structure_equations() -> list:
    """``L_{X_b} theta^a = -c^a_{bc} theta^c`` for the left-invariant frame."""
    M = su2_killing()
    worst = 0.0
    for a, b in itertools.product(range(3), repeat=2):
        theta = DifferentialForm.basis(M, a)
        got = theta.lie_derivative(frame_field(M, b))
        want = DifferentialForm.zero(M)
        for c in range(3):
            coef = M.structure_constants[a][b][c]
            if coef:
                want = want + DifferentialForm.basis(M, c, coeff=-coef)
        worst = max(worst, _form_gap(got, want))
    return [exact("hodge.su2.lie_derivative_of_coframe", worst == 0.0, worst)]


def _laplacian_spectrum() -> list:
    """Functions in the spin-j block are Laplace eigenfunctions with eigenvalue j(j+1) (Killing metric)."""
    M = su2_killing()
    worst = 0.0
    for j in (Fraction(1, 2), Fraction(1), Fraction(3, 2)):
        for e in MP.wigner_basis(j):
            got = DifferentialForm.function(M, e.poly).laplace_beltrami()
            want = DifferentialForm.function(M, e.poly.scale(S.rational(j * (j + 1))))
            worst = max(worst, _form_gap(got, want))
    return [exact("hodge.su2.laplacian_on_wigner", worst == 0.0, worst)]


def hodge_suite(tol: float | None = None) -> list:
    checks = _hodge_table()
    checks += _operator_identities(euclidean_r3(), "r3", ("x", "y", "z"), count=200, seed=3)
    checks += _operator_identities(su2_killing(), "su2", _SU2_NAMES, count=200, seed=5)
    checks += _adjointness()
    checks += _structure_equations()
    checks += _laplacian_spectrum()
    return checks


# ---------------------------------------------------------------------------
# harmonics
# ---------------------------------------------------------------------------

HALF_INTEGERS = (Fraction(1, 2), Fraction(1), Fraction(3, 2))


def _wigner_checks() -> list:
    out = []
    everything = []
    for j in HALF_INTEGERS:
        basis = MP.wigner_basis(j)
        everything += basis
        out.append(exact(f"harmonics.wigner.j={j}.count", len(basis) == (2 * j + 1) ** 2))
        for op in ("L2", "Lz", "X3"):
            reports = [MP.eigen_check(e.poly, op, e.j, e.n, e.m) for e in basis]
            worst = max(r.residual for r in reports)
            out.append(exact(f"harmonics.wigner.j={j}.{op}", all(r.residual == 0.0 and r.exact for r in reports),
                             worst))
        worst = 0.0
        for e in basis:
            lhs = MP.constraint_operator(e.poly)
            rhs = MP._apply_operator("X3", e.poly).scale(MP.constraint_sign())
            if not lhs.equals_on_sphere(rhs):
                worst = max(worst, _poly_gap(lhs.normal_form(), rhs.normal_form()) or 1.0)
        out.append(exact(f"harmonics.constraint.j={j}", worst == 0.0, worst,
                         f"sigma = {MP.constraint_sign():+d}"))
        for n in MP._half_steps(j):
            sub = MP.equivariant_subspace(basis, n)
            out.append(exact(f"harmonics.equivariant.j={j}.n={n}", len(sub) == 2 * j + 1,
                             abs(len(sub) - (2 * j + 1))))
    # Peter-Weyl: off-diagonal Haar integrals vanish exactly, diagonal is 1/(2j+1) after normalization
    off = 0.0
    diag = 0.0
    for a, b in itertools.combinations_with_replacement(range(len(everything)), 2):
        ea, eb = everything[a], everything[b]
        val = haar_integral(ea.poly.conjugate() * eb.poly)
        if a == b:
            diag = max(diag, abs(float(S.to_fraction(val.re)) * ea.norm ** 2 - 1 / float(2 * ea.j + 1)))
        elif complex(val) != 0:
            off = max(off, abs(complex(val)))
    out.append(exact("harmonics.peter_weyl.orthogonality", off == 0.0, off))
    out.append(numeric("harmonics.peter_weyl.normalization", diag, 1e-12))
    return out


def _reference_half(m) -> tuple:
    """``(complex factor, exact form)`` of the reference spin-1/2 element."""
    (phase, square, pi_power), name = FX.HALF_REFERENCE[m]
    M = MP.killing_manifold()
    # theta^+ = theta_plus_scaled / sqrt(2)
    factor = MP.Surd(phase, square / 2, pi_power)
    return factor.value(), MP.theta_plus_scaled(M).scale(M.ring.var(name))


def _reference_gap(el, factor: complex, form: DifferentialForm) -> float:
    mine = el.form.scale(S.coerce(el.factor.value()))
    theirs = form.scale(S.coerce(factor))
    return _form_gap(mine, theirs)


def _vector_checks(tol: float) -> list:
    out = []
    volume = MP.haar_volume()
    for name, basis in (("j1", MP.j1_basis()), ("half", MP.half_basis())):
        for el in basis:
            h = MP.horizontal_forms_check(el.form)
            out.append(exact(f"harmonics.vector.{name}.m={el.m}.horizontal", h.horizontal))
            out.append(exact(f"harmonics.vector.{name}.m={el.m}.equivariant", h.charge is not None,
                             detail=f"charge {h.charge}"))
            for op in ("L2", "Lz"):
                r = MP.eigen_check(el.form, op, el.j, None, el.m)
                out.append(exact(f"harmonics.vector.{name}.m={el.m}.{op}", r.residual == 0.0 and r.exact,
                                 r.residual))
            if name == "j1":
                ph, sq, pp = FX.J1_FACTORS[el.m]
                gap = _reference_gap(el, MP.Surd(ph, sq, pp).value(), el.form)
            else:
                gap = _reference_gap(el, *_reference_half(el.m))
            derived = el.derived_volume()
            rel = abs(derived - volume) / volume
            out.append(numeric(f"harmonics.vector.{name}.m={el.m}.volume_constant", rel, tol,
                               f"derived {derived!r}, frozen {volume!r}, "
                               f"distance to reference element {gap:.3g}"))
        worst = 0.0
        for a, b in itertools.combinations(basis, 2):
            val = haar_integral(a.form.pointwise_inner(b.form))
            worst = max(worst, abs(complex(val)))
        out.append(exact(f"harmonics.vector.{name}.orthogonality", worst == 0.0, worst))
    return out


def _tower_checks() -> list:
    out = []
    Y = MP.spherical_harmonics(1)
    half = MP.half_basis()
    forms = {f.m: f for f in half}
    table = {J: oracles.clebsch_gordan_table(1, Fraction(1, 2), J) for J in (Fraction(3, 2), Fraction(1, 2))}
    reference = MP.reference_towers()
    relabeled = 0
    mismatch = 0
    for (J, M), terms in sorted(reference.items()):
        for sign, sq, mY, ma in terms:
            mY = Fraction(mY)
            if mY + ma != M:
                relabeled += 1
                ma = M - mY
            if table[J].get((mY, ma, M)) != (sign, sq):
                mismatch += 1
    out.append(exact("harmonics.towers.cg_coefficients", mismatch == 0, mismatch,
                     f"{relabeled} reference alpha indices relabeled to m_Y + m_alpha = M"))
    for J in (Fraction(3, 2), Fraction(1, 2)):
        tower = MP.cg_combine(Y, half, J)
        worst = 0.0
        for M, el in tower.items():
            for op in ("L2", "Lz", "X3"):
                n = Fraction(1, 2) if op == "X3" else None
                lam = None
                if op == "X3":
                    lam = MP.expected_eigenvalue("X3", None, MP.horizontal_forms_check(half[0].form).charge, None)
                r = MP.eigen_check(el.form, op, J, n, M, eigenvalue=lam)
                if not (r.residual == 0.0 and r.exact):
                    worst = max(worst, r.residual or 1.0)
        out.append(exact(f"harmonics.towers.j={J}.eigen", worst == 0.0, worst))
        # Racah and lowering agree exactly under squares
        bad = 0
        for (m1, m2, M), v in table[J].items():
            if MP.clebsch_gordan_signed_square(1, Fraction(1, 2), m1, m2, J, M) != v:
                bad += 1
        out.append(exact(f"harmonics.towers.j={J}.racah_vs_lowering", bad == 0, bad))
    return out


def _haar_oracle(tol: float) -> list:
    names = ("u", "ub", "v", "vb")
    worst = 0.0
    count = 0
    for degree in range(7):
        for combo in itertools.combinations_with_replacement(names, degree):
            p = SU2.monomial(1, **{n: combo.count(n) for n in names if combo.count(n)})
            worst = max(worst, abs(complex(haar_integral(p)) - oracles.haar_quadrature(p)))
            count += 1
    return [numeric("harmonics.haar.quadrature_oracle", worst, tol, f"{count} monomials of degree <= 6")]


def _flow_oracle(tol: float) -> list:
    import numpy as np

    from .frames import left_invariant_fields, right_invariant_fields

    X, L = left_invariant_fields(SU2), right_invariant_fields(SU2)
    rng = random.Random(17)
    points = oracles.random_points(np.random.default_rng(17), 4)
    worst = 0.0
    for _ in range(3):
        p = random_polynomial(SU2, rng, _SU2_NAMES, max_degree=4, terms=4)
        for (u, v), a in itertools.product(points, range(3)):
            for side, fields in (("right", X), ("left", L)):
                exact_value = fields[a](p).eval({"u": u, "v": v})
                worst = max(worst, abs(oracles.flow_derivative(p, u, v, a, side) - exact_value))
    return [numeric("harmonics.frames.flow_oracle", worst, tol)]


def harmonics_suite(tol: float | None = None) -> list:
    checks = _wigner_checks()
    checks += _vector_checks(1e-10 if tol is None else tol)
    checks += _tower_checks()
    checks += _haar_oracle(1e-3 if tol is None else tol)
    checks += _flow_oracle(1e-8 if tol is None else tol)
    return checks


# ---------------------------------------------------------------------------
# spectrum
# ---------------------------------------------------------------------------

RADIAL_CASES = ((1, Fraction(0)), (1, Fraction(1, 2)), (2, Fraction(1)))


def parse_grid(text: str):
    start, stop, step = (float(x) for x in text.split(":"))
    return MP.make_grid(start, stop, step)


def spectrum_suite(tol: float | None = None, grid: str | None = None, k_wave: float = 1.0) -> list:
    cfg = MP.constants()["radial"]
    tol = cfg["tolerance"] if tol is None else tol
    r = parse_grid(grid or cfg["grid"])
    checks = []
    for l, n in RADIAL_CASES:
        case = MP.RadialCase(l, n, cfg["mass"], k_wave)
        rep = MP.radial_residual(case, r)
        checks.append(numeric(f"spectrum.radial.l={l}.n={n}", rep.max_residual, tol, f"mu = {rep.mu!r}"))
    for k in (1, 4):
        for j, n in ((Fraction(1, 2), Fraction(1, 2)), (Fraction(1), Fraction(1)), (Fraction(1), Fraction(0))):
            psi = next(e.poly for e in MP.wigner_basis(j) if e.n == n)
            rep = MP.reduced_hamiltonian_apply(psi, k=k, n=n, j=j)
            want = rep.result.ring.const(n * n / k)
            ok = rep.matches and rep.shift is not None and rep.shift.normal_form() == want
            checks.append(exact(f"spectrum.shift.k={k}.j={j}.n={n}", ok, detail=f"shift {rep.shift}"))
            first = rep.first_order_coefficient.normal_form()
            checks.append(exact(f"spectrum.first_order.k={k}.j={j}.n={n}", first == first.ring.const(2),
                                detail=f"coefficient {first}"))
    return checks


SUITE_FUNCTIONS: dict[str, Callable[..., list]] = {
    "clifford": clifford_suite,
    "hodge": hodge_suite,
    "harmonics": harmonics_suite,
    "spectrum": spectrum_suite,
}


def run(suite: str, tol: float | None = None, grid: str | None = None, k_wave: float = 1.0) -> Report:
    if suite not in SUITES and suite != "all":
        raise ValueError(f"unknown suite {suite!r}")
    names: Iterable[str] = SUITES if suite == "all" else (suite,)
    checks = []
    for name in names:
        if name == "spectrum":
            checks += spectrum_suite(tol, grid, k_wave)
        else:
            checks += SUITE_FUNCTIONS[name](tol)
    checks.sort(key=lambda c: c.id)
    ids = [c.id for c in checks]
    if len(set(ids)) != len(ids):
        raise RuntimeError("duplicate check ids")
    return Report(suite, checks)


__all__ = ["Check", "Report", "SUITES", "run", "parse_grid", "clifford_suite", "hodge_suite",
           "harmonics_suite", "spectrum_suite"]
