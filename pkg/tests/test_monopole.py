import itertools
import json
import math
from fractions import Fraction

import numpy as np
import pytest
import scipy.special as sp
from hypothesis import given
from hypothesis import strategies as st
from sympy import Rational
from sympy.physics.quantum.cg import CG

from formqm import _scalar as S
from formqm import fixtures as FX
from formqm import frames as F
from formqm import monopole as MP
from formqm import oracles
from formqm.bessel import jv
from formqm.polyring import SU2, haar_integral

H = Fraction(1, 2)
spins = st.sampled_from([Fraction(0), H, Fraction(1), Fraction(3, 2), Fraction(2)])


def test_half_integer_parsing():
    assert MP.half_integer("3/2") == Fraction(3, 2)
    assert MP.half_integer(0.5) == H
    assert MP.half_integer(2) == 2
    with pytest.raises(ValueError):
        MP.half_integer("1/3")


def test_frozen_constants():
    assert MP.haar_volume() == pytest.approx(8 * math.pi ** 2, rel=1e-15)
    assert MP.constraint_sign() == 1


def test_constants_can_be_replaced(tmp_path, monkeypatch):
    data = json.loads(json.dumps(MP.constants()))
    data["haar_volume"]["coefficient"] = 16
    path = tmp_path / "c.json"
    path.write_text(json.dumps(data))
    monkeypatch.setenv("FORMQM_CONSTANTS", str(path))
    assert MP.haar_volume() == pytest.approx(16 * math.pi ** 2)
    monkeypatch.delenv("FORMQM_CONSTANTS")
    assert MP.haar_volume() == pytest.approx(8 * math.pi ** 2)


# -- Wigner functions -------------------------------------------------------------

@given(spins)
def test_wigner_basis_is_an_exact_eigenbasis(j):
    basis = MP.wigner_basis(j)
    assert len(basis) == (2 * j + 1) ** 2
    for e in basis:
        for op in ("L2", "Lz", "X3", "xL"):
            r = MP.eigen_check(e.poly, op, e.j, e.n, e.m)
            assert r.exact and r.residual == 0.0, (op, e.n, e.m)
        assert MP.casimir(e.poly).normal_form() == e.poly.scale((-j * (j + 1), 0)).normal_form()


def test_wigner_j_half_generators():
    polys = {(e.n, e.m): e.poly for e in MP.wigner_basis(H)}
    u, ub, v, vb = SU2.vars("u", "ub", "v", "vb")
    # weights of the coordinate functions
    assert polys[(H, H)] == ub
    for (n, m), p in polys.items():
        assert p.normal_form().is_zero() is False
    assert {p.degree_in(["u", "ub", "v", "vb"]) for p in polys.values()} == {1}


def test_wrong_label_fails_eigen_check():
    e = MP.wigner_basis(1)[0]
    assert not MP.eigen_check(e.poly, "Lz", e.j, e.n, e.m - 1).passed
    with pytest.raises(ValueError):
        MP.expected_eigenvalue("Lx", 1, 0, 0)


def test_peter_weyl_orthogonality():
    everything = [e for j in (0, H, 1, Fraction(3, 2)) for e in MP.wigner_basis(j)]
    for a, b in itertools.combinations(everything, 2):
        assert complex(haar_integral(a.poly.conjugate() * b.poly)) == 0
    for e in everything:
        assert float(e.mean_square()) * e.norm ** 2 == pytest.approx(1 / float(2 * e.j + 1), rel=1e-12)


def test_wigner_normalization_against_quadrature():
    for e in MP.wigner_basis(Fraction(3, 2)):
        p = e.poly.conjugate() * e.poly
        assert oracles.haar_quadrature(p).real * e.norm ** 2 == pytest.approx(0.25, abs=1e-10)


@given(spins)
def test_equivariant_subspaces(j):
    basis = MP.wigner_basis(j)
    sizes = [len(MP.equivariant_subspace(basis, n)) for n in MP._half_steps(j)]
    assert sizes == [2 * j + 1] * int(2 * j + 1)
    assert MP.equivariant_subspace(basis, j + 1) == []


def test_constraint_on_wigner():
    for j in (H, 1, Fraction(3, 2)):
        for e in MP.wigner_basis(j):
            lhs = MP.constraint_operator(e.poly)
            assert lhs.equals_on_sphere(e.poly.scale((0, e.n)))


# -- spherical harmonics ---------------------------------------------------------------

@pytest.mark.parametrize("l", [0, 1, 2, 3])
def test_spherical_harmonics_match_scipy(l):
    xs = F.hopf_projection()
    pts = oracles.random_points(np.random.default_rng(l), 4)
    for m, y in MP.spherical_harmonics(l).items():
        assert F.left_invariant_fields(SU2)[2](y.poly).normal_form().is_zero()
        for u, v in pts:
            x, yy, z = (p.eval({"u": u, "v": v}).real for p in xs)
            ref = sp.sph_harm_y(l, int(m), np.arccos(z), np.arctan2(yy, x))
            assert y.factor.value() * y.poly.eval({"u": u, "v": v}) == pytest.approx(ref, abs=1e-13)


def test_spherical_harmonics_reject_half_integers():
    with pytest.raises(ValueError):
        MP.spherical_harmonics(H)


# -- vector-valued bases ------------------------------------------------------------------

def _reference_half(m):
    (phase, square, pi_power), name = FX.HALF_REFERENCE[m]
    M = MP.killing_manifold()
    factor = MP.Surd(phase, square / 2, pi_power)
    return factor.value(), MP.theta_plus_scaled(M).scale(M.ring.var(name))


def test_j1_basis():
    basis = MP.j1_basis()
    for el in basis:
        h = MP.horizontal_forms_check(el.form)
        assert h.horizontal and h.invariant and h.charge == 0
        for op in ("L2", "Lz"):
            assert MP.eigen_check(el.form, op, el.j, None, el.m).residual == 0.0
        assert el.factor == MP.Surd(*FX.J1_FACTORS[el.m])
        assert el.derived_volume() == pytest.approx(8 * math.pi ** 2, rel=1e-12)
        assert el.norm_squared() == pytest.approx(1.0, rel=1e-12)


def test_half_basis():
    basis = MP.half_basis()
    for el in basis:
        h = MP.horizontal_forms_check(el.form)
        assert h.horizontal and not h.invariant and h.charge == H
        for op in ("L2", "Lz"):
            assert MP.eigen_check(el.form, op, el.j, None, el.m).residual == 0.0
        assert el.derived_volume() == pytest.approx(8 * math.pi ** 2, rel=1e-12)
        factor, form = _reference_half(el.m)
        mine = el.form.scale(S.coerce(el.factor.value()))
        assert mine.close_to(form.scale(S.coerce(factor)), 1e-15)


def test_vector_bases_are_orthogonal():
    for basis in (MP.j1_basis(), MP.half_basis()):
        for a, b in itertools.combinations(basis, 2):
            assert complex(haar_integral(a.form.pointwise_inner(b.form))) == 0


def test_riemannian_volume_is_twice_the_frozen_constant():
    # integrate |det theta^a(d_i)| over Hopf coordinates with the frame X_a orthonormal
    sigma = [np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]), np.array([[1, 0], [0, -1]])]
    x, w = np.polynomial.legendre.leggauss(40)
    eta = (x + 1) * np.pi / 4
    total = 0.0
    for e, we in zip(eta, w):
        u, v = np.cos(e), np.sin(e)   # the integrand does not depend on the two phases
        s = np.array([[u, -v], [v, u]], dtype=complex)
        ds = [np.array([[-v, -u], [u, -v]]),                      # d/d eta
              np.array([[1j * u, 0], [0, -1j * u]]),              # d/d xi1
              np.array([[0, 1j * v], [1j * v, 0]])]               # d/d xi2
        sinv = s.conj().T
        J = np.array([[(1j * np.trace(sg @ sinv @ d)).real for d in ds] for sg in sigma])
        total += we * abs(np.linalg.det(J))
    vol = total * (np.pi / 4) * (2 * np.pi) ** 2
    assert vol == pytest.approx(16 * math.pi ** 2, rel=1e-12)
    assert vol / MP.haar_volume() == pytest.approx(2.0, rel=1e-12)


def test_horizontal_check_flags_vertical_forms():
    M = MP.killing_manifold()
    from formqm.exterior import DifferentialForm

    h = MP.horizontal_forms_check(DifferentialForm.basis(M, 2))
    assert not h.horizontal and h.invariant


# -- Clebsch-Gordan ------------------------------------------------------------------------

def _all_cg(jmax=2):
    vals = [Fraction(k, 2) for k in range(int(2 * jmax) + 1)]
    for j1, j2 in itertools.product(vals, repeat=2):
        for j in vals + [j1 + j2]:
            for m1 in MP._half_steps(j1):
                for m2 in MP._half_steps(j2):
                    yield j1, j2, m1, m2, j, m1 + m2


def test_racah_matches_sympy():
    def R(q):
        return Rational(q.numerator, q.denominator)

    for j1, j2, m1, m2, j, m in _all_cg(Fraction(3, 2)):
        sign, sq = MP.clebsch_gordan_signed_square(j1, j2, m1, m2, j, m)
        ref = CG(R(j1), R(m1), R(j2), R(m2), R(j), R(m)).doit()
        assert float(ref) == pytest.approx(sign * math.sqrt(sq), abs=1e-14)
        assert (ref ** 2) == Rational(sq.numerator, sq.denominator)


@pytest.mark.parametrize("j1,j2", [(1, H), (H, H), (Fraction(3, 2), 1), (2, H)], ids=str)
def test_racah_matches_lowering_oracle(j1, j2):
    for J in np.arange(float(abs(j1 - j2)), float(j1 + j2) + 0.5, 1.0):
        J = Fraction(J).limit_denominator(2)
        for (m1, m2, M), v in oracles.clebsch_gordan_table(j1, j2, J).items():
            assert MP.clebsch_gordan_signed_square(j1, j2, m1, m2, J, M) == v


def test_cg_unitarity():
    j1, j2 = Fraction(3, 2), 1
    for m1, m2 in itertools.product(MP._half_steps(j1), MP._half_steps(j2)):
        total = sum(MP.clebsch_gordan_signed_square(j1, j2, m1, m2, J, m1 + m2)[1]
                    for J in (H, Fraction(3, 2), Fraction(5, 2)))
        assert total == 1


def test_reference_tower_layout_is_inconsistent():
    bad = [(key, t) for key, terms in MP.reference_towers().items() for t in terms if t[2] + t[3] != key[1]]
    assert len(bad) == 4


def _relabeled(terms, M):
    return [(s, q, mY, M - mY) for s, q, mY, _ in terms]


def test_relabeled_towers_are_cg_eigenforms():
    Y = MP.spherical_harmonics(1)
    forms = {f.m: f for f in MP.half_basis()}
    for (J, M), terms in MP.reference_towers().items():
        fixed = _relabeled(terms, M)
        for s, q, mY, ma in fixed:
            assert MP.clebsch_gordan_signed_square(1, H, mY, ma, J, M) == (s, q)
        form = MP.assemble_tower(fixed, Y, forms)
        for op in ("L2", "Lz"):
            assert MP.eigen_check(form, op, J, None, M).passed, (J, M, op)


def test_reference_layout_breaks_lz():
    Y = MP.spherical_harmonics(1)
    forms = {f.m: f for f in MP.half_basis()}
    for (J, M), terms in MP.reference_towers().items():
        if all(t[2] + t[3] == M for t in terms):
            continue
        form = MP.assemble_tower(terms, Y, forms)
        assert not MP.eigen_check(form, "Lz", J, None, M).passed


def test_cg_combine_towers():
    Y = MP.spherical_harmonics(1)
    half = MP.half_basis()
    for J in (H, Fraction(3, 2)):
        tower = MP.cg_combine(Y, half, J)
        assert sorted(tower) == sorted(MP._half_steps(J))
        for M, el in tower.items():
            for op in ("L2", "Lz"):
                r = MP.eigen_check(el.form, op, J, None, M)
                assert r.exact and r.residual == 0.0
            assert MP.horizontal_forms_check(el.form).charge == H
    with pytest.raises(ValueError):
        MP.cg_combine(Y, half, Fraction(5, 2))


# -- reduced Hamiltonian --------------------------------------------------------------------

@pytest.mark.parametrize("k", [1, 4, Fraction(9, 4)], ids=str)
def test_reduced_hamiltonian_shift(k):
    for j in (H, 1, Fraction(3, 2)):
        for e in MP.wigner_basis(j):
            if e.m != j:
                continue
            rep = MP.reduced_hamiltonian_apply(e.poly, k=k, n=e.n, j=j)
            ring = rep.result.ring
            assert rep.matches
            assert rep.shift.normal_form() == ring.const(e.n * e.n / Fraction(k))
            assert rep.first_order_coefficient.normal_form() == ring.const(2)


def test_reduced_hamiltonian_irrational_k_is_numeric():
    e = MP.wigner_basis(H)[0]
    rep = MP.reduced_hamiltonian_apply(e.poly, k=Fraction(1, 2), n=e.n, j=H)
    ring = rep.result.ring
    assert rep.matches
    assert rep.shift.close_to(ring.const(Fraction(1, 2)), 1e-12)


def test_reduced_hamiltonian_with_radial_profile():
    from formqm.polyring import SU2R

    e = next(e for e in MP.wigner_basis(1) if e.n == 1)
    r = SU2R.var("r")
    psi = SU2R.embed(e.poly) * (r * r * r - r.scale(2))
    rep = MP.reduced_hamiltonian_apply(psi, k=4, n=1)
    assert rep.matches and rep.shift is None


def test_reduced_hamiltonian_rejects_wrong_charge():
    e = next(e for e in MP.wigner_basis(1) if e.n == 1)
    with pytest.raises(ValueError):
        MP.reduced_hamiltonian_apply(e.poly, k=1, n=0)


# -- radial equation --------------------------------------------------------------------------

@pytest.mark.parametrize("nu", [0.0, 0.5, 1.0, math.sqrt(2), math.sqrt(6), 7.3])
def test_bessel_matches_scipy(nu):
    x = np.linspace(0.01, 40, 2001)
    ref = sp.jv(nu, x)
    env = np.maximum(np.abs(ref), 1 / np.sqrt(x))  # relative to the oscillation envelope
    assert np.max(np.abs(jv(nu, x) - ref) / env) < 1e-12


def test_bessel_rejects_bad_input():
    with pytest.raises(ValueError):
        jv(-1, 1.0)
    with pytest.raises(ValueError):
        jv(1, 0.0)


@pytest.mark.parametrize("l,n", [(1, 0), (1, H), (2, 1), (H, H), (3, Fraction(7, 2))], ids=str)
def test_radial_residual(l, n):
    case = MP.RadialCase(l, n)
    assert case.mu_squared == (Fraction(l) + H) ** 2 - Fraction(n) ** 2
    rep = MP.radial_residual(case, MP.make_grid(0.5, 10, 0.001))
    assert rep.has_solution and rep.max_residual < 1e-6
    assert rep.grid_points == 9501


def test_radial_residual_has_a_rounding_floor():
    rep = MP.radial_residual(MP.RadialCase(1, 0), MP.make_grid(0.5, 10, 0.001))
    assert rep.max_residual > 1e-12


def test_radial_residual_converges_at_fourth_order():
    case = MP.RadialCase(2, 1, k_wave=2.0)
    coarse = MP.radial_residual(case, MP.make_grid(1, 6, 0.04)).max_residual
    fine = MP.radial_residual(case, MP.make_grid(1, 6, 0.02)).max_residual
    assert 12 < coarse / fine < 20


def test_radial_mass_and_energy():
    case = MP.RadialCase.from_energy(1, 0, energy=2.0, mass=0.5)
    assert case.k_wave == pytest.approx(math.sqrt(2.0))
    assert case.energy == pytest.approx(2.0)
    assert MP.radial_residual(case, MP.make_grid(0.5, 5, 0.001)).max_residual < 1e-6
    none = MP.RadialCase.from_energy(1, 0, energy=-1.0)
    rep = MP.radial_residual(none, MP.make_grid(0.5, 5, 0.01))
    assert not rep.has_solution and math.isnan(rep.max_residual)


def test_unsupported_sector():
    with pytest.raises(MP.UnsupportedSector):
        MP.RadialCase(1, 2)
    with pytest.raises(ValueError):
        MP.RadialCase(1, 0, mass=0)


def test_grid_validation():
    with pytest.raises(ValueError):
        MP.make_grid(1, 0, 0.1)
    with pytest.raises(ValueError):
        MP.radial_residual(MP.RadialCase(1, 0), np.array([0.001, 0.002, 0.003]))
    with pytest.raises(ValueError):
        MP.radial_residual(MP.RadialCase(1, 0), np.array([1.0, 1.1, 1.3]))
