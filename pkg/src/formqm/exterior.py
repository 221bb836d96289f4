"""Differential forms in a global frame.

A form is a map from strictly increasing frame-index tuples to polynomial
coefficients, ``sum_I f_I theta^I``.  Mixed degrees are allowed (the Clifford
layer needs them); degree-specific operators act homogeneous part by part.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Mapping

from . import _scalar as S
from .frames import FrameManifold, VectorField
from .polyring import Gaussian, Polynomial


class ManifoldMismatch(ValueError):
    pass


class UnsupportedDomain(ValueError):
    """Raised when an exact integral is requested on a non-compact manifold."""


def merge_sign(a: tuple, b: tuple) -> int:
    """Sign of the shuffle sorting ``a + b``; 0 if they share an index."""
    if set(a) & set(b):
        return 0
    inversions = sum(1 for x in a for y in b if x > y)
    return -1 if inversions % 2 else 1


class DifferentialForm:
    __slots__ = ("manifold", "components")

    def __init__(self, manifold: FrameManifold, components: Mapping[tuple, Polynomial] | None = None):
        self.manifold = manifold
        comps = {}
        for key, coef in (components or {}).items():
            key = tuple(key)
            if list(key) != sorted(set(key)):
                raise ValueError(f"frame indices must be strictly increasing: {key}")
            if coef.ring is not manifold.ring:
                coef = manifold.ring.embed(coef)
            if not coef.is_zero():
                comps[key] = coef
        self.components = dict(sorted(comps.items(), key=lambda kv: (len(kv[0]), kv[0])))

    # -- construction ----------------------------------------------------
    @classmethod
    def zero(cls, manifold: FrameManifold) -> "DifferentialForm":
        return cls(manifold)

    @classmethod
    def function(cls, manifold: FrameManifold, f) -> "DifferentialForm":
        if not isinstance(f, Polynomial):
            f = manifold.ring.const(f)
        return cls(manifold, {(): f})

    @classmethod
    def basis(cls, manifold: FrameManifold, *indices: int, coeff=1) -> "DifferentialForm":
        """``coeff * theta^{i1} ^ theta^{i2} ...`` (indices in any order, sign applied)."""
        if not isinstance(coeff, Polynomial):
            coeff = manifold.ring.const(coeff)
        form = cls.function(manifold, coeff)
        for i in indices:
            form = form.wedge(cls(manifold, {(i,): manifold.ring.one()}))
        return form

    @classmethod
    def from_labels(cls, manifold: FrameManifold, entries: Mapping[str, object]) -> "DifferentialForm":
        """Build from ``{"dx^dy": coeff, "": f}``-style label strings."""
        out = cls.zero(manifold)
        for key, coef in entries.items():
            labels = [p for p in key.split("^") if p and p != "1"]
            idx = [manifold.labels.index(lab) for lab in labels]
            out = out + cls.basis(manifold, *idx, coeff=coef)
        return out

    # -- inspection ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.components

    def degrees(self) -> set:
        return {len(k) for k in self.components}

    def degree(self) -> int:
        degs = self.degrees()
        if len(degs) > 1:
            raise ValueError("form is not homogeneous")
        return degs.pop() if degs else 0

    def part(self, k: int) -> "DifferentialForm":
        return DifferentialForm(self.manifold, {I: f for I, f in self.components.items() if len(I) == k})

    def coefficient(self, *indices: int) -> Polynomial:
        return self.components.get(tuple(indices), self.manifold.ring.zero())

    def _check(self, other: "DifferentialForm"):
        if other.manifold is not self.manifold:
            raise ManifoldMismatch(f"{self.manifold.name} vs {other.manifold.name}")

    # -- linear structure ------------------------------------------------
    def __add__(self, other: "DifferentialForm") -> "DifferentialForm":
        self._check(other)
        out = dict(self.components)
        for I, f in other.components.items():
            out[I] = out[I] + f if I in out else f
        return DifferentialForm(self.manifold, out)

    def __neg__(self):
        return DifferentialForm(self.manifold, {I: -f for I, f in self.components.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, f) -> "DifferentialForm":
        """Multiply every coefficient by a scalar or a function."""
        if isinstance(f, Polynomial):
            return DifferentialForm(self.manifold, {I: f * c for I, c in self.components.items()})
        return DifferentialForm(self.manifold, {I: c.scale(f) for I, c in self.components.items()})

    def map_coefficients(self, fn) -> "DifferentialForm":
        return DifferentialForm(self.manifold, {I: fn(c) for I, c in self.components.items()})

    def normal_form(self) -> "DifferentialForm":
        return self.map_coefficients(Polynomial.normal_form)

    def conjugate(self) -> "DifferentialForm":
        """Complex conjugate (the frame is real)."""
        return self.map_coefficients(Polynomial.conjugate)

    def __eq__(self, other):
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        return other.manifold is self.manifold and (self - other).is_zero()

    def __hash__(self):
        return hash(tuple(self.components))

    def equals_on_sphere(self, other: "DifferentialForm") -> bool:
        return (self - other).normal_form().is_zero()

    def close_to(self, other: "DifferentialForm", tol: float) -> bool:
        diff = (self - other).normal_form()
        return all(c.max_abs() <= tol for c in diff.components.values())

    # -- algebra ---------------------------------------------------------
    def wedge(self, other: "DifferentialForm") -> "DifferentialForm":
        self._check(other)
        out: dict = {}
        for I, f in self.components.items():
            for J, g in other.components.items():
                sign = merge_sign(I, J)
                if not sign:
                    continue
                K = tuple(sorted(I + J))
                term = f * g if sign > 0 else -(f * g)
                out[K] = out[K] + term if K in out else term
        return DifferentialForm(self.manifold, out)

    __xor__ = wedge

    def contract(self, X) -> "DifferentialForm":
        """Interior product with a frame field (index) or a :class:`VectorField`."""
        if isinstance(X, VectorField):
            if X.manifold is not self.manifold:
                raise ManifoldMismatch("vector field lives on another manifold")
            out = DifferentialForm.zero(self.manifold)
            for a, f in enumerate(X.components):
                if not f.is_zero():
                    out = out + self.contract(a).scale(f)
            return out
        a = int(X)
        out = {}
        for I, f in self.components.items():
            if a in I:
                pos = I.index(a)
                out[I[:pos] + I[pos + 1:]] = f if pos % 2 == 0 else -f
        return DifferentialForm(self.manifold, out)

    def hodge_star(self) -> "DifferentialForm":
        """Metric dual: ``alpha ^ *beta = (alpha|beta) Omega`` with ``Omega = vol * theta^1...theta^n``."""
        M = self.manifold
        n = M.dim
        full = tuple(range(n))
        inv = [_inverse_entry(g, M.labels[i]) for i, g in enumerate(M.metric_diag)]
        out = {}
        for I, f in self.components.items():
            Ic = tuple(i for i in full if i not in I)
            coef = f * M.volume
            for i in I:
                coef = coef * inv[i]
            out[Ic] = coef if merge_sign(I, Ic) > 0 else -coef
        return DifferentialForm(M, out)

    # -- calculus --------------------------------------------------------
    def d(self) -> "DifferentialForm":
        M = self.manifold
        dtheta = _frame_differentials(M)
        out = DifferentialForm.zero(M)
        for I, f in self.components.items():
            parts = {}
            for a, E in enumerate(M.frame_actions):
                if a in I:
                    continue
                g = E(f)
                if not g.is_zero():
                    K = tuple(sorted((a,) + I))
                    parts[K] = g if merge_sign((a,), I) > 0 else -g
            out = out + DifferentialForm(M, parts)
            # f * d(theta^I) via the graded Leibniz rule
            for p, a in enumerate(I):
                if dtheta[a].is_zero():
                    continue
                left = DifferentialForm.basis(M, *I[:p])
                right = DifferentialForm.basis(M, *I[p + 1:])
                term = left.wedge(dtheta[a]).wedge(right).scale(f)
                out = out + (term if p % 2 == 0 else -term)
        return out

    def codifferential(self) -> "DifferentialForm":
        """``delta = (-1)^(n(k-1)+1) * d *`` per degree; Lorentzian manifolds drop the ``+1``."""
        M = self.manifold
        n = M.dim
        out = DifferentialForm.zero(M)
        for k in sorted(self.degrees()):
            if k == 0:
                continue
            exponent = n * (k - 1) + (1 if M.signature == "riemannian" else 0)
            term = self.part(k).hodge_star().d().hodge_star()
            out = out + (term if exponent % 2 == 0 else -term)
        return out

    def laplace_beltrami(self) -> "DifferentialForm":
        """Hodge Laplacian ``d delta + delta d`` (non-negative; ``-div grad`` on functions)."""
        return self.codifferential().d() + self.d().codifferential()

    def dirac_kahler(self) -> "DifferentialForm":
        """``D = d - delta``, so that ``D^2 = -Delta``."""
        return self.d() - self.codifferential()

    def lie_derivative(self, X: VectorField) -> "DifferentialForm":
        """Cartan's formula ``i_X d + d i_X``."""
        return self.d().contract(X) + self.contract(X).d()

    # -- inner products --------------------------------------------------
    def pointwise_inner(self, other: "DifferentialForm") -> Polynomial:
        """``(alpha|beta)``: conjugate-linear in ``alpha``, diagonal metric inverse on each slot."""
        self._check(other)
        M = self.manifold
        inv = [_inverse_entry(g, M.labels[i]) for i, g in enumerate(M.metric_diag)]
        total = M.ring.zero()
        for I, f in self.components.items():
            g = other.components.get(I)
            if g is None:
                continue
            term = f.conjugate() * g
            for i in I:
                term = term * inv[i]
            total = total + term
        return total

    def l2_inner(self, other: "DifferentialForm") -> Gaussian:
        return self.inner_report(other).integrated

    def inner_report(self, other: "DifferentialForm") -> "FormInnerProductReport":
        M = self.manifold
        if M.integrator is None:
            raise UnsupportedDomain(f"no exact measure on {M.name}; supply a numeric measure")
        pointwise = self.pointwise_inner(other)
        integrated = M.integrator(pointwise * M.volume)
        compatible = self.degrees() == other.degrees() or self.is_zero() or other.is_zero()
        return FormInnerProductReport(pointwise, integrated, compatible)

    # -- serialization ---------------------------------------------------
    def to_json(self) -> dict:
        labels = self.manifold.labels
        return {
            "manifold": self.manifold.name,
            "components": [
                {"indices": [labels[i] for i in I], "coefficient": f.to_json()}
                for I, f in self.components.items()
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, manifold: FrameManifold, data) -> "DifferentialForm":
        if isinstance(data, str):
            data = json.loads(data)
        comps = {}
        for entry in data["components"]:
            idx = tuple(sorted(manifold.labels.index(lab) for lab in entry["indices"]))
            comps[idx] = Polynomial.from_json(manifold.ring, entry["coefficient"])
        return cls(manifold, comps)

    def __str__(self):
        if not self.components:
            return "0"
        labels = self.manifold.labels
        parts = []
        for I, f in self.components.items():
            basis = "^".join(labels[i] for i in I) or "1"
            parts.append(f"({f}) {basis}")
        return " + ".join(parts)

    __repr__ = __str__


@dataclass(frozen=True)
class FormInnerProductReport:
    pointwise: Polynomial
    integrated: Gaussian
    degree_compatible: bool


def _inverse_entry(g: Polynomial, label: str) -> Polynomial:
    try:
        return g.inverse()
    except ZeroDivisionError:
        raise ValueError(f"degenerate metric entry for {label}: {g}") from None


_DTHETA_CACHE: dict = {}


def _frame_differentials(M: FrameManifold) -> list:
    """``d theta^a = -sum_{b<c} c^a_{bc} theta^b ^ theta^c``."""
    cached = _DTHETA_CACHE.get(id(M))
    if cached is not None and cached[0] is M:
        return cached[1]
    ring = M.ring
    out = []
    for a in range(M.dim):
        comps = {}
        for b, c in combinations(range(M.dim), 2):
            val = M.structure_constants[a][b][c]
            if val != 0:
                comps[(b, c)] = ring.const(-val)
        out.append(DifferentialForm(M, comps))
    _DTHETA_CACHE[id(M)] = (M, out)
    return out


def wedge(a: DifferentialForm, b: DifferentialForm) -> DifferentialForm:
    return a.wedge(b)


def function_form(manifold: FrameManifold, f) -> DifferentialForm:
    return DifferentialForm.function(manifold, f)


def exact_differential(manifold: FrameManifold, name: str) -> DifferentialForm:
    """``d(x)`` for a coordinate function ``x`` (e.g. ``du`` on SU(2))."""
    return DifferentialForm.function(manifold, manifold.ring.var(name)).d()


def volume_form(manifold: FrameManifold) -> DifferentialForm:
    return DifferentialForm.basis(manifold, *range(manifold.dim), coeff=manifold.volume)
