import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import forms, polynomials
from formqm import clifford as C
from formqm import fixtures as FX
from formqm import linalg
from formqm.exterior import DifferentialForm
from formqm.frames import euclidean_r3, su2_killing
from formqm.polyring import R3

R3M = euclidean_r3()
SU2M = su2_killing()
CTX = C.context_for(R3M)
GENERIC = C.clifford_ring(None)

r3_forms = forms(R3M, ("x", "y", "z"), max_degree=1)
xis = st.builds(Fraction, st.integers(0, 12), st.integers(1, 6))


def one_form(coeffs):
    return DifferentialForm(R3M, {(a,): R3.const(c) for a, c in enumerate(coeffs)})


# -- the product ----------------------------------------------------------------

def test_generators_anticommute():
    for M in (R3M, SU2M):
        ctx = C.context_for(M)
        for a, b in itertools.product(range(3), repeat=2):
            ea, eb = ctx.generator(a), ctx.generator(b)
            anti = ctx.vee(ea, eb) + ctx.vee(eb, ea)
            want = DifferentialForm.function(M, 2 if a == b else 0)
            assert anti == want


def test_product_examples():
    dx, dy, dz = (CTX.generator(a) for a in range(3))
    assert CTX.vee(dx, dy) == dx ^ dy
    assert CTX.vee(dx ^ dy, dy) == dx
    assert CTX.vee(dx ^ dy, dx ^ dy) == DifferentialForm.function(R3M, -1)
    vol = CTX.volume_element()
    assert CTX.vee(vol, vol) == DifferentialForm.function(R3M, -1)
    assert CTX.vee_all(dx, dy, dz) == vol


@given(r3_forms, r3_forms, r3_forms)
def test_product_is_associative(a, b, c):
    assert CTX.vee(CTX.vee(a, b), c) == CTX.vee(a, CTX.vee(b, c))


@given(r3_forms)
def test_unit(a):
    one = DifferentialForm.function(R3M, 1)
    assert CTX.vee(one, a) == a and CTX.vee(a, one) == a


@given(st.lists(st.integers(-3, 3), min_size=3, max_size=3), r3_forms)
def test_one_form_product_is_wedge_plus_contraction(coeffs, phi):
    from formqm.frames import VectorField

    v = one_form(coeffs)
    V = VectorField(R3M, tuple(R3.const(c) for c in coeffs))
    assert CTX.vee(v, phi) == (v ^ phi) + phi.contract(V)


@given(r3_forms)
def test_volume_element_is_central(a):
    vol = CTX.volume_element()
    assert CTX.vee(vol, a) == CTX.vee(a, vol)


def test_product_rejects_foreign_forms():
    from formqm.exterior import ManifoldMismatch

    with pytest.raises(ManifoldMismatch):
        CTX.vee(CTX.generator(0), DifferentialForm.basis(SU2M, 0))


# -- projectors and ideals ------------------------------------------------------

@given(xis)
def test_projector_family_is_idempotent(xi):
    P = C.projector_family(xi)
    assert C.is_idempotent(P)
    assert C.covariant_constancy(P)


def test_generic_projector_is_idempotent():
    res = C.is_idempotent(C.projector_family(scalars=GENERIC))
    assert res.idempotent and res.residual == 0.0


def test_rho_is_rational_when_possible():
    s = C.clifford_ring(Fraction(3, 8))
    assert "rho" not in s.ring.names
    assert s.rho == s.ring.const(Fraction(5, 8))
    s = C.clifford_ring(1)
    assert "rho" in s.ring.names
    assert (s.rho * s.rho) == s.ring.const(Fraction(5, 4))


def test_float_xi_is_read_as_decimal():
    assert C.clifford_ring(0.5) is C.clifford_ring(Fraction(1, 2))
    assert C.clifford_ring(0.1).xi_value == Fraction(1, 10)
    with pytest.raises(ValueError):
        C.clifford_ring(-1)


def test_non_idempotent_is_rejected():
    s = C.clifford_ring(0)
    M = C.r3_over(s.ring)
    P = DifferentialForm(M, {(): s.ring.const(Fraction(1, 2)), (0,): s.ring.const(1)})
    res = C.is_idempotent(P)
    assert not res and res.residual > 0
    with pytest.raises(ValueError):
        C.ideal_basis(P)


@pytest.mark.parametrize("xi", [None, 0, Fraction(1, 2), 1, Fraction(3, 8)], ids=str)
def test_ideal_matches_reference(xi):
    s = GENERIC if xi is None else C.clifford_ring(xi)
    ideal = C.spinor_ideal(scalars=s)
    M = ideal.manifold
    assert ideal.dim == 4
    for got, entries in zip(ideal.basis, FX.PSI_REAL):
        assert got == FX.form(entries, M, s)
    for rm in C.generator_matrices(ideal):
        assert rm == FX.matrix(FX.GENERATORS_REAL[rm.label], s)
    J = C.volume_complex_structure(ideal)
    assert J == FX.matrix(FX.VOLUME_J, s)


def test_dx_is_diagonal_at_xi_zero():
    dx = C.generator_matrices(C.spinor_ideal(0))[0].matrix
    ring = dx[0][0].ring
    assert linalg.equal(dx, [[ring.const((1 if i % 2 == 0 else -1) if i == j else 0) for j in range(4)]
                             for i in range(4)])


@given(xis)
def test_generator_matrices_represent_the_algebra(xi):
    ideal = C.spinor_ideal(xi)
    ring = ideal.manifold.ring
    mats = [rm.matrix for rm in C.generator_matrices(ideal)]
    ident = linalg.identity(ring, 4)
    for a, b in itertools.product(range(3), repeat=2):
        anti = linalg.add(linalg.matmul(mats[a], mats[b]), linalg.matmul(mats[b], mats[a]))
        assert linalg.equal(anti, linalg.scale(ident, 2) if a == b else linalg.zeros(ring, 4))
    J = C.volume_complex_structure(ideal).matrix
    assert linalg.equal(linalg.matmul(J, J), linalg.scale(ident, -1))
    assert linalg.equal(J, linalg.matmul(mats[0], linalg.matmul(mats[1], mats[2])))
    for m in mats:
        assert linalg.is_zero(linalg.commutator(J, m))


def test_ideal_membership():
    ideal = C.spinor_ideal(0)
    M = ideal.manifold
    assert ideal.contains(ideal.basis[2].scale(M.ring.var("x")))
    assert not ideal.contains(DifferentialForm.function(M, 1))
    with pytest.raises(ValueError):
        ideal.coordinates(DifferentialForm.basis(M, 0))


# -- operators -------------------------------------------------------------------

def test_dirac_matrix_matches_reference():
    ideal = C.spinor_ideal(scalars=GENERIC)
    D = C.dirac_matrix(ideal)
    want = FX.operator_symbols(FX.DIRAC_REAL, GENERIC)
    for c in "xyz":
        assert linalg.equal(D.symbols[c], want[c])


def test_dirac_squares_to_laplacian_symbol():
    ring = GENERIC.ring
    sq = C.dirac_matrix(C.spinor_ideal(scalars=GENERIC)).square()
    ident = linalg.identity(ring, 4)
    for (a, b), m in sq.items():
        assert linalg.equal(m, ident if a == b else linalg.zeros(ring, 4))


@given(st.lists(polynomials(GENERIC.ring, ("x", "y", "z"), 2, 2), min_size=4, max_size=4))
def test_dirac_matrix_acts_like_d_minus_delta(fs):
    ideal = C.spinor_ideal(scalars=GENERIC)
    D = C.dirac_matrix(ideal)
    psi = ideal.combine(fs)
    assert ideal.combine(D.apply(fs)) == psi.dirac_kahler()
    vol = ideal.context.volume_element()
    assert ideal.context.vee(vol, psi).dirac_kahler() == ideal.context.vee(vol, psi.dirac_kahler())


def test_complex_reduction_matches_reference():
    red = C.complex_reduction(C.spinor_ideal(scalars=GENERIC))
    complex_ref = FX.operator_symbols(FX.DIRAC_COMPLEX, GENERIC)
    for c in "xyz":
        assert linalg.equal(red.generator_images[c], complex_ref[c])
        assert linalg.equal(red.generator_images[c], FX.matrix(FX.COMPLEX_IMAGES["d" + c], GENERIC))
    images = [red.generator_images[c] for c in "xyz"]
    assert C.commutant_dimension(images) == 1


@given(xis)
def test_complex_images_are_an_irreducible_clifford_module(xi):
    s = C.clifford_ring(xi)
    ring = s.ring
    images = C.complex_reduction(C.spinor_ideal(scalars=s)).generator_images
    ident = linalg.identity(ring, 2)
    for a, b in itertools.product("xyz", repeat=2):
        anti = linalg.add(linalg.matmul(images[a], images[b]), linalg.matmul(images[b], images[a]))
        assert linalg.equal(anti, linalg.scale(ident, 2) if a == b else linalg.zeros(ring, 2))
    assert C.commutant_dimension(list(images.values())) == 1


def test_xi_zero_is_unitarily_pauli():
    s = C.clifford_ring(0)
    ring = s.ring
    images = C.complex_reduction(C.spinor_ideal(scalars=s)).generator_images
    src = [images[c] for c in "xyz"]
    pauli = C.pauli_matrices(ring)
    U = C.intertwiner(src, pauli)
    assert U is not None
    Udag = [[U[j][i].conjugate() for j in range(2)] for i in range(2)]
    UU = linalg.matmul(Udag, U)
    assert not UU[0][0].is_zero()
    assert linalg.equal(UU, linalg.scale(linalg.identity(ring, 2), UU[0][0]))
    for S_, T_ in zip(src, pauli):
        assert linalg.equal(linalg.matmul(U, S_), linalg.matmul(T_, U))


def test_intertwiner_absent_for_inequivalent_sets():
    ring = R3
    pauli = C.pauli_matrices(ring)
    flipped = [linalg.scale(m, -1) for m in pauli]
    assert C.intertwiner(pauli, flipped) is None


# -- complexified algebra -----------------------------------------------------------

def test_complexified_idempotent():
    spin = C.complexified_idempotent()
    ideal = spin.ideal
    M = ideal.manifold
    s = C.CliffordScalars(M.ring, M.ring.zero(), M.ring.zero())
    assert C.is_idempotent(ideal.projector)
    assert ideal.projector == FX.form(FX.COMPLEX_PROJECTOR, M, s)
    for got, entries in zip(ideal.basis, FX.PSI_COMPLEX):
        assert got == FX.form(entries, M, s)
    ctx = ideal.context
    for g, src, coeff, tgt in FX.COMPLEX_IDENTITIES:
        gen = ctx.generator(M.labels.index(g))
        assert ctx.vee(gen, ideal.basis[src]) == ideal.basis[tgt].scale(FX.scalar(coeff, s))
    for rm in spin.matrices:
        assert rm == FX.matrix(FX.PAULI_REFERENCE[rm.label], s)


def test_complexified_matrices_are_pauli_up_to_transpose():
    spin = C.complexified_idempotent()
    pauli = C.pauli_matrices(R3)
    for rm, p in zip(spin.matrices, pauli):
        assert linalg.equal(rm.matrix, linalg.transpose(p))


def test_ideal_json():
    data = C.spinor_ideal(0).to_json()
    assert data["dim"] == 4 and len(data["basis"]) == 4
    assert data["parameters"] == {"rho": "1/2", "xi": "0"}


def test_associativity_on_500_constant_triples():
    import random

    from formqm.sampling import random_form

    rng = random.Random(500)
    for _ in range(500):
        a, b, c = (random_form(R3M, rng, max_degree=0, density=0.6) for _ in range(3))
        assert CTX.vee(CTX.vee(a, b), c) == CTX.vee(a, CTX.vee(b, c))
