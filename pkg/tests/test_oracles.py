"""The independent references are themselves checked against closed forms."""
import math
from fractions import Fraction

import numpy as np
import pytest

from formqm import oracles
from formqm.polyring import SU2


def test_quadrature_weights_and_points():
    u, v, w = oracles.hopf_nodes(10, 10)
    assert np.sum(w) == pytest.approx(1.0, rel=1e-13)
    assert np.allclose(np.abs(u) ** 2 + np.abs(v) ** 2, 1.0)


def test_quadrature_closed_forms():
    u, ub, v, vb = SU2.vars("u", "ub", "v", "vb")
    # E|u|^(2a) |v|^(2c) = a! c! / (a + c + 1)!
    for a, c in [(1, 0), (2, 1), (3, 2)]:
        p = (u * ub) ** a * (v * vb) ** c
        want = math.factorial(a) * math.factorial(c) / math.factorial(a + c + 1)
        assert oracles.haar_quadrature(p).real == pytest.approx(want, abs=1e-13)
    assert abs(oracles.haar_quadrature(u * u * vb)) < 1e-14


def test_random_points_on_sphere():
    pts = oracles.random_points(np.random.default_rng(0), 5)
    assert all(abs(abs(u) ** 2 + abs(v) ** 2 - 1) < 1e-14 for u, v in pts)


def test_flow_derivative_of_coordinate():
    # d/dt u(s exp(t A_3)) at t = 0 is -i u / 2
    u = SU2.var("u")
    a, b = 0.6 + 0.0j, 0.8j
    assert oracles.flow_derivative(u, a, b, 2, "right") == pytest.approx(-0.5j * a, abs=1e-10)


def test_lowering_table_small_cases():
    t = oracles.clebsch_gordan_table(Fraction(1, 2), Fraction(1, 2), 0)
    h = Fraction(1, 2)
    assert t[(h, -h, 0)] == (1, Fraction(1, 2))
    assert t[(-h, h, 0)] == (-1, Fraction(1, 2))
    t = oracles.clebsch_gordan_table(1, h, Fraction(3, 2))
    assert t[(0, h, h)] == (1, Fraction(2, 3))
    assert t[(1, -h, h)] == (1, Fraction(1, 3))
