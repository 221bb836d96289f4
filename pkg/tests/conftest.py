from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from formqm import _scalar as S
from formqm.exterior import DifferentialForm

settings.register_profile(
    "formqm", max_examples=40, deadline=None, derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("formqm")

small = st.integers(-3, 3)
rationals = st.builds(Fraction, st.integers(-4, 4), st.integers(1, 3))
gaussians = st.builds(lambda a, b: (S.rational(a), S.rational(b)), rationals, small)


def polynomials(ring, names=None, max_degree=3, max_terms=4):
    names = list(names or ring.names)

    def build(terms):
        out = ring.zero()
        for factors, coeff in terms:
            mono = [0] * ring.nvars
            for name in factors:
                mono[ring.index[name]] += 1
            out = out + ring.from_terms({tuple(mono): coeff})
        return out

    monomials = st.lists(st.sampled_from(names), max_size=max_degree)
    return st.lists(st.tuples(monomials, gaussians), max_size=max_terms).map(build)


def forms(manifold, names=None, max_degree=2, degrees=None):
    import itertools

    n = manifold.dim
    degrees = range(n + 1) if degrees is None else degrees
    blades = [I for k in degrees for I in itertools.combinations(range(n), k)]

    def build(coeffs):
        return DifferentialForm(manifold, {I: c for I, c in zip(blades, coeffs)})

    return st.lists(polynomials(manifold.ring, names, max_degree, 2),
                    min_size=len(blades), max_size=len(blades)).map(build)


@pytest.fixture(scope="session")
def killing():
    from formqm.frames import su2_killing

    return su2_killing()


@pytest.fixture(scope="session")
def r3():
    from formqm.frames import euclidean_r3

    return euclidean_r3()
