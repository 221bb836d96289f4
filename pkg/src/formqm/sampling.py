"""Seeded random polynomials, forms and spinors for property checks."""
from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Sequence

from . import _scalar as S
from .exterior import DifferentialForm
from .frames import FrameManifold
from .polyring import PolyRing, Polynomial


def random_coefficient(rng: random.Random, bound: int = 3, complex_: bool = True):
    re = S.rational(Fraction(rng.randint(-bound, bound), rng.randint(1, 2)))
    im = S.rational(rng.randint(-bound, bound)) if complex_ else S.ZERO
    return (re, im)


def random_polynomial(ring: PolyRing, rng: random.Random, names: Sequence[str] | None = None,
                      max_degree: int = 3, terms: int = 4, complex_: bool = True) -> Polynomial:
    """Sum of ``terms`` random monomials of total degree at most ``max_degree`` in ``names``."""
    names = list(names or ring.names)
    out = {}
    for _ in range(terms):
        degree = rng.randint(0, max_degree)
        mono = [0] * ring.nvars
        for _ in range(degree):
            mono[ring.index[rng.choice(names)]] += 1
        out[tuple(mono)] = random_coefficient(rng, complex_=complex_)
    return ring.from_terms(out).normal_form()


def random_form(manifold: FrameManifold, rng: random.Random, degrees: Sequence[int] | None = None,
                names: Sequence[str] | None = None, max_degree: int = 3, density: float = 0.5,
                complex_: bool = True) -> DifferentialForm:
    """A form whose nonzero components each carry a random polynomial coefficient."""
    n = manifold.dim
    degrees = range(n + 1) if degrees is None else degrees
    comps = {}
    for k in degrees:
        for I in itertools.combinations(range(n), k):
            if rng.random() < density:
                comps[I] = random_polynomial(manifold.ring, rng, names, max_degree, terms=2, complex_=complex_)
    return DifferentialForm(manifold, comps)
