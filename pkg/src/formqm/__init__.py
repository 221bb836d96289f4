"""Quantum mechanics on Hilbert spaces of differential forms.

Exterior and Kähler-Clifford calculus over parallelizable frames, monopole
harmonics on SU(2), vector-valued harmonics as one-forms and algebraic spinors
for the Dirac-Kähler operator.
"""
from ._scalar import BACKEND
from .exterior import DifferentialForm
from .frames import FrameManifold, euclidean_r3, r4_monopole, su2_killing
from .polyring import SU2, SU2R, R3, Derivation, Polynomial, PolyRing, haar_integral

__all__ = [
    "BACKEND", "SU2", "SU2R", "R3", "Derivation", "DifferentialForm", "FrameManifold", "Polynomial",
    "PolyRing", "euclidean_r3", "haar_integral", "r4_monopole", "su2_killing",
]
__version__ = "0.1.0"
