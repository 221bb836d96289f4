import json
from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given

from conftest import polynomials
from formqm import frames as F
from formqm import oracles
from formqm.polyring import R3, SU2, Derivation, PolyRing
from formqm.monopole import constraint_sign

su2_polys = polynomials(SU2, max_degree=4)

X = F.left_invariant_fields(SU2)
L = F.right_invariant_fields(SU2)


def test_euclidean_r3_descriptor(r3):
    assert all(c == 0 for a in r3.structure_constants for b in a for c in b)
    assert r3.metric_diag == (R3.one(), R3.one(), R3.one())
    x = R3.var("x")
    assert r3.frame_actions[0](x * x) == x.scale(2)
    assert r3.labels == ("dx", "dy", "dz")


def test_x3_on_generators():
    u, ub, v, vb = SU2.vars("u", "ub", "v", "vb")
    half_i = SU2.const((0, Fraction(1, 2)))
    assert X[2](u) == -(half_i * u)
    assert X[2](v) == -(half_i * v)
    assert X[2](ub) == half_i * ub
    assert X[2](vb) == half_i * vb


def test_commutation_relations():
    assert X[0].commutator(X[1]).equals(X[2])
    assert X[1].commutator(X[2]).equals(X[0])
    assert L[0].commutator(L[1]).equals(L[2].times(-1))
    for a, b in product(range(3), repeat=2):
        assert L[a].commutator(X[b]).equals(Derivation(SU2, {}))


def test_jacobi_identity():
    def zero(d):
        return d.equals(Derivation(SU2, {}))

    A, B, C = X
    total = A.commutator(B.commutator(C)) + B.commutator(C.commutator(A)) + C.commutator(A.commutator(B))
    assert zero(total)


def test_structure_constants_are_epsilon(killing):
    eps = {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1, (0, 2, 1): -1, (2, 1, 0): -1, (1, 0, 2): -1}
    for a, b, c in product(range(3), repeat=3):
        assert killing.structure_constants[a][b][c] == eps.get((a, b, c), 0)
        assert killing.structure_constants[a][b][c] == -killing.structure_constants[a][c][b]
    assert killing.metric_diag == (SU2.one(),) * 3


def test_fields_preserve_sphere():
    u, ub, v, vb = SU2.vars("u", "ub", "v", "vb")
    norm = u * ub + v * vb
    for D in X + L:
        assert D(norm).normal_form().is_zero()


@given(su2_polys)
def test_casimirs_agree(p):
    left = sum((Xa(Xa(p)) for Xa in X), SU2.zero())
    right = sum((La(La(p)) for La in L), SU2.zero())
    assert left.equals_on_sphere(right)


@given(su2_polys)
def test_constraint_equivalence(p):
    xs = F.hopf_projection()
    lhs = sum((x * La(p) for x, La in zip(xs, L)), SU2.zero())
    assert lhs.equals_on_sphere(X[2](p).scale(constraint_sign()))


def test_constraint_sign_is_frozen_positive():
    assert constraint_sign() == 1


def test_hopf_projection():
    xs = F.hopf_projection()
    u, ub, v, vb = SU2.vars("u", "ub", "v", "vb")
    assert xs[2] == u * ub - v * vb
    total = sum((x * x for x in xs), SU2.zero())
    assert total.equals_on_sphere(SU2.one())
    assert [x.eval({"u": 1, "v": 0}) for x in xs] == [0, 0, 1]
    for x in xs:
        assert X[2](x).normal_form().is_zero()


def test_fields_match_flow_oracle():
    rng = np.random.default_rng(3)
    u, ub, v, vb = SU2.vars("u", "ub", "v", "vb")
    p = u * u * vb + ub * v * v - u * vb.scale(3)
    for (a_, b_), axis in product(oracles.random_points(rng, 3), range(3)):
        assert abs(oracles.flow_derivative(p, a_, b_, axis, "right") - X[axis](p).eval({"u": a_, "v": b_})) < 1e-8
        assert abs(oracles.flow_derivative(p, a_, b_, axis, "left") - L[axis](p).eval({"u": a_, "v": b_})) < 1e-8


def test_right_fields_in_left_frame(killing):
    p = SU2.var("u") * SU2.var("vb") + SU2.var("v")
    for a in range(3):
        Y = F.right_invariant_vector(killing, a + 1).derivation()
        assert Y(p).equals_on_sphere(L[a](p))


def test_frame_components_recover_frame(killing):
    for a in range(3):
        comps = F.frame_components(killing, X[a])
        assert [c.normal_form() for c in comps] == [SU2.one() if b == a else SU2.zero() for b in range(3)]


def test_r4_monopole():
    M = F.r4_monopole(4)
    r2 = M.ring.monomial(1, r=2)
    assert M.metric_diag[3] == M.ring.const(4)
    assert M.metric_diag[1] == r2
    assert M.volume == r2.scale(2)
    assert M.labels == ("dr", "th1", "th2", "th3")
    M2 = F.r4_monopole(2)
    assert not M2.volume.exact
    with pytest.raises(ValueError):
        F.r4_monopole(0)
    with pytest.raises(ValueError):
        F.r4_monopole(-1.5)


def test_manifold_json_export(killing):
    data = json.loads(killing.dumps())
    assert data["dim"] == 3
    assert data["labels"] == ["th1", "th2", "th3"]
    assert json.loads(killing.dumps()) == data


# -- operators ----------------------------------------------------------------

STR = PolyRing(["s", "t", "x", "y", "z"])
PARTIALS = F.coordinate_derivations(STR, ("s", "t", "x", "y", "z"))
PARTIAL_MAP = dict(zip(("s", "t", "x", "y", "z"), PARTIALS))


def test_homogenized_symbol():
    x = STR.var("x")
    V = x * x
    D = F.schrodinger_operator(V)
    Dp = F.homogenize(D)
    sym = F.principal_symbol(Dp)
    half = STR.const(Fraction(1, 2))
    assert sym[("s", "s")] == V
    assert sym[("s", "t")] == half and sym[("t", "s")] == half
    for c in "xyz":
        assert sym[(c, c)] == STR.one()
    assert not Dp.b and Dp.c.is_zero()


def test_homogenize_without_potential():
    Dp = F.homogenize(F.schrodinger_operator(STR.zero()))
    assert ("s", "s") not in F.principal_symbol(Dp)


def test_symbol_determinant_is_constant():
    # det [[V, 1/2], [1/2, 0]] = -1/4 whatever V is, so D' is never degenerate
    for V in (STR.zero(), STR.var("x"), STR.var("x") * STR.var("y") - STR.one()):
        det = F.symbol_determinant(F.homogenize(F.schrodinger_operator(V)))
        assert det == STR.const(Fraction(-1, 4))


def test_fiber_reduction_recovers_schrodinger():
    x = STR.var("x")
    D = F.schrodinger_operator(x * x)
    Dp = F.homogenize(D)
    assert F.fiber_reduce(Dp, charge=1).equals(
        F.SecondOrderOperator(D.coords, D.a, D.b, D.c))
    # e^{-is} gives the conjugate operator -i d_t + Lap - V
    conj = F.fiber_reduce(Dp, charge=-1)
    assert conj.coeff1("t") == STR.const((0, -1))
    assert conj.c == -(x * x)


def test_fiber_reduction_on_sample_function():
    x, t = STR.vars("x", "t")
    psi = x * x * t
    D = F.schrodinger_operator(x * x)
    reduced = F.fiber_reduce(F.homogenize(D), charge=1)
    assert reduced.apply(psi, PARTIAL_MAP) == D.apply(psi, PARTIAL_MAP)


def test_laplacian_symbol_is_identity():
    op = F.SecondOrderOperator(("x", "y"), {("x", "x"): STR.one(), ("y", "y"): STR.one()}, {}, STR.zero())
    assert F.symbol_matrix(op) == [[STR.one(), STR.zero()], [STR.zero(), STR.one()]]
    first = F.SecondOrderOperator(("x",), {}, {"x": STR.one()}, STR.zero())
    assert F.principal_symbol(first) == {}


def test_homogenize_rejects_other_shapes():
    bad = F.SecondOrderOperator(("t", "x"), {("x", "x"): STR.const(2)}, {"t": STR.const((0, 1))}, STR.zero())
    with pytest.raises(ValueError):
        F.homogenize(bad)
