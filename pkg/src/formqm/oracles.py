"""Independent numeric routes used to cross-check the exact algebra.

Nothing here touches the symbolic derivations: Haar integrals come from
Gauss-Legendre quadrature in Hopf coordinates, and vector fields on SU(2)
from central differences along the one-parameter flows ``s exp(tA)`` and
``exp(tA) s``.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from ._scalar import sqrt_rational, to_fraction
from .polyring import Polynomial

_SIGMA = (np.array([[0, 1], [1, 0]], dtype=complex),
          np.array([[0, -1j], [1j, 0]]),
          np.array([[1, 0], [0, -1]], dtype=complex))


def evaluate(poly: Polynomial, values: dict) -> np.ndarray:
    """Vectorized evaluation; ``values`` maps the unbarred names to complex arrays."""
    ring = poly.ring
    arrays = {}
    for name, arr in values.items():
        i = ring.index[name]
        arrays[i] = np.asarray(arr, dtype=complex)
        j = ring.conj[i]
        if j != i:
            arrays[j] = np.conj(arrays[i])
    shape = np.broadcast(*arrays.values()).shape if arrays else ()
    total = np.zeros(shape, dtype=complex)
    for mono, (re, im) in poly.terms.items():
        term = np.full(shape, complex(float(re), float(im)))
        for i, e in enumerate(mono):
            if e:
                if i not in arrays:
                    raise KeyError(f"no value for {ring.names[i]}")
                term = term * arrays[i] ** e
        total += term
    return total


def hopf_nodes(n_eta: int = 24, n_phi: int = 24):
    """Quadrature nodes ``(u, v, weight)`` on SU(2) for the unit-mass Haar measure.

    ``u = cos(eta) e^{i phi1}``, ``v = sin(eta) e^{i phi2}`` with density
    ``sin(2 eta) / (4 pi^2)`` on ``[0, pi/2] x [0, 2pi)^2``.  The trapezoid
    rule in the angles is exact for trigonometric degree below ``n_phi``.
    """
    x, w = np.polynomial.legendre.leggauss(n_eta)
    eta = (x + 1) * np.pi / 4
    w_eta = w * np.pi / 4 * np.sin(2 * eta)
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    w_phi = np.full(n_phi, 2 * np.pi / n_phi)
    E, P1, P2 = np.meshgrid(eta, phi, phi, indexing="ij")
    W = (w_eta[:, None, None] * w_phi[None, :, None] * w_phi[None, None, :]) / (4 * np.pi ** 2)
    u = np.cos(E) * np.exp(1j * P1)
    v = np.sin(E) * np.exp(1j * P2)
    return u.ravel(), v.ravel(), W.ravel()


def haar_quadrature(poly: Polynomial, n_eta: int = 24, n_phi: int = 24) -> complex:
    u, v, w = hopf_nodes(n_eta, n_phi)
    return complex(np.sum(evaluate(poly, {"u": u, "v": v}) * w))


def _exp_su2(a: int, t: float) -> np.ndarray:
    # exp(-i t sigma_a / 2)
    return np.cos(t / 2) * np.eye(2) - 1j * np.sin(t / 2) * _SIGMA[a]


def _point(u: complex, v: complex) -> np.ndarray:
    return np.array([[u, -np.conj(v)], [v, np.conj(u)]])


def flow_derivative(poly: Polynomial, u: complex, v: complex, a: int,
                    side: str = "right", h: float = 1e-4) -> complex:
    """``d/dt poly(s exp(t A_a))`` (``side="right"``) or ``poly(exp(t A_a) s)`` at ``t = 0``.

    Fourth-order central difference.
    """
    s = _point(u, v)

    def value(t):
        g = _exp_su2(a, t)
        m = s @ g if side == "right" else g @ s
        return complex(evaluate(poly, {"u": m[0, 0], "v": m[1, 0]}))

    return (-value(2 * h) + 8 * value(h) - 8 * value(-h) + value(-2 * h)) / (12 * h)


def random_points(rng: np.random.Generator, count: int):
    """Uniform points on SU(2) as ``(u, v)`` pairs."""
    z = rng.normal(size=(count, 4))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    return [(complex(a, b), complex(c, d)) for a, b, c, d in z]


# ---------------------------------------------------------------------------
# Clebsch-Gordan coefficients by highest-weight construction and lowering
# ---------------------------------------------------------------------------

def _surd_add(a, b):
    """``s1 sqrt(q1) + s2 sqrt(q2)`` for commensurable surds, as ``(sign, square)``."""
    (s1, q1), (s2, q2) = a, b
    if q1 == 0 or s1 == 0:
        return b
    if q2 == 0 or s2 == 0:
        return a
    root = sqrt_rational(Fraction(q1) / Fraction(q2))
    if root is None:
        raise ValueError("incommensurable surds")
    c = s1 * to_fraction(root) + s2          # total = c * sqrt(q2)
    if c == 0:
        return (0, Fraction(0))
    return (1 if c > 0 else -1), c * c * q2


def _ladder(j, m, step):
    # |<j, m+step| J_step |j, m>|^2
    return (j - m) * (j + m + 1) if step > 0 else (j + m) * (j - m + 1)


def clebsch_gordan_table(j1, j2, J) -> dict:
    """``{(m1, m2, M): (sign, square)}`` for the multiplet ``J`` in ``j1 x j2``.

    The top state solves ``J_+ |J J> = 0`` with ``<j1 j1; j2 J-j1 | J J> > 0``
    (Condon-Shortley), then ``J_-`` walks down the multiplet.
    """
    j1, j2, J = Fraction(j1), Fraction(j2), Fraction(J)
    # J_+ annihilation: c(m1+1) sqrt(a(m1)) + c(m1) sqrt(b(m2)) = 0 with m2 = J - m1
    top = {}
    m1 = j1
    sign, sq = 1, Fraction(1)
    while m1 >= -j1 and abs(J - m1) <= j2:
        top[m1] = (sign, sq)
        nxt = m1 - 1
        if nxt < -j1 or abs(J - nxt) > j2:
            break
        a = _ladder(j1, nxt, +1)
        b = _ladder(j2, J - nxt - 1, +1)
        if a == 0:
            break
        sign, sq = -sign, sq * b / a if b else Fraction(0)
        m1 = nxt
    norm = sum(q for _, q in top.values())
    state = {(m, J - m): (s, q / norm) for m, (s, q) in top.items()}
    table = {(m1, m2, J): v for (m1, m2), v in state.items()}
    M = J
    while M > -J:
        lower = {}
        for (m1, m2), (s, q) in state.items():
            for key, factor in (((m1 - 1, m2), _ladder(j1, m1, -1)), ((m1, m2 - 1), _ladder(j2, m2, -1))):
                if factor == 0 or abs(key[0]) > j1 or abs(key[1]) > j2:
                    continue
                lower[key] = _surd_add(lower.get(key, (0, Fraction(0))), (s, q * factor))
        denom = _ladder(J, M, -1)
        state = {k: (s, q / denom) for k, (s, q) in lower.items() if s != 0}
        M -= 1
        for (m1, m2), v in state.items():
            table[(m1, m2, M)] = v
    return table
