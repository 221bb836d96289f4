"""Sparse polynomials over conjugation-paired variables.

A :class:`PolyRing` fixes the ordered variable names, the conjugation pairing
and which variables may carry negative (Laurent) exponents.  Rings can carry
rewrite relations ``lead -> tail``; *eager* relations are applied after every
operation, the others only to polynomials flagged ``reduced`` (the unit-sphere
relation ``v vb -> 1 - u ub`` is of the second kind so that homogeneity of
Wigner polynomials survives until it is explicitly discarded).
"""
from __future__ import annotations

import json
import math
from operator import add, sub
from typing import Iterable, Mapping

from . import _scalar as S
from ._scalar import Gaussian, Q


class RingMismatch(ValueError):
    pass


class PolyRing:
    """Ordered variable set with conjugation involution and relations."""

    def __init__(self, names: Iterable[str], conjugate_pairs=(), laurent=(), label=None):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")
        self.index = {n: i for i, n in enumerate(self.names)}
        conj = list(range(len(self.names)))
        for a, b in conjugate_pairs:
            ia, ib = self.index[a], self.index[b]
            if conj[ia] != ia or conj[ib] != ib:
                raise ValueError(f"variable paired twice: {a}, {b}")
            conj[ia], conj[ib] = ib, ia
        self.conj = tuple(conj)
        self.laurent = frozenset(self.index[n] for n in laurent)
        self.label = label or "[" + ",".join(self.names) + "]"
        self.nvars = len(self.names)
        self._zero_mono = (0,) * self.nvars
        # (lead monomial, tail polynomial terms, eager, powers cache)
        self._rules: list = []

    def __repr__(self):
        return f"PolyRing({self.label})"

    # -- relations -------------------------------------------------------
    def add_relation(self, lead: Mapping[str, int], tail: "Polynomial", eager: bool = False):
        """Register ``prod(lead) -> tail``.  Tails must avoid every lead variable."""
        mono = [0] * self.nvars
        for n, e in lead.items():
            if e <= 0:
                raise ValueError("relation lead exponents must be positive")
            mono[self.index[n]] = e
        mono = tuple(mono)
        if tail.ring is not self:
            raise RingMismatch("relation tail in another ring")
        lead_vars = {i for i, e in enumerate(mono) if e} | {
            i for r in self._rules for i, e in enumerate(r[0]) if e
        }
        for m in tail.terms:
            if any(m[i] for i in lead_vars):
                raise ValueError("relation tail contains a lead variable; rewrite is not confluent")
        for r in self._rules:
            if any(r_m[i] for r_m in r[1] for i, e in enumerate(mono) if e):
                raise ValueError("existing relation tail contains the new lead")
        self._rules.append((mono, dict(tail.terms), eager, {0: {self._zero_mono: (S.ONE, S.ZERO)}}))

    @property
    def has_lazy_relations(self) -> bool:
        return any(not r[2] for r in self._rules)

    def _tail_power(self, rule, k):
        cache = rule[3]
        if k not in cache:
            prev = self._tail_power(rule, k - 1)
            cache[k] = _mul_terms(prev, rule[1])
        return cache[k]

    def _apply_rules(self, terms: dict, full: bool) -> dict:
        for rule in self._rules:
            lead, _, eager, _ = rule
            if not (eager or full):
                continue
            support = [(i, e) for i, e in enumerate(lead) if e]
            hit = False
            for m in terms:
                if all(m[i] >= e for i, e in support):
                    hit = True
                    break
            if not hit:
                continue
            out: dict = {}
            for m, c in terms.items():
                k = min(m[i] // e for i, e in support)
                if k <= 0:
                    _acc(out, m, c)
                    continue
                base = list(m)
                for i, e in support:
                    base[i] -= k * e
                flt = not S.is_exact_pair(c)
                for tm, tc in self._tail_power(rule, k).items():
                    if flt:
                        tc = S.to_float_pair(tc)
                    _acc(out, tuple(map(add, base, tm)), S.pair_mul(c, tc))
            terms = {m: c for m, c in out.items() if not S.pair_is_zero(c)}
        return terms

    # -- constructors ----------------------------------------------------
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, value) -> "Polynomial":
        c = S.coerce(value)
        return Polynomial(self, {self._zero_mono: c})

    def var(self, name: str) -> "Polynomial":
        m = [0] * self.nvars
        m[self.index[name]] = 1
        return Polynomial(self, {tuple(m): (S.ONE, S.ZERO)})

    def vars(self, *names: str):
        return tuple(self.var(n) for n in names)

    def monomial(self, coeff=1, **exponents) -> "Polynomial":
        m = [0] * self.nvars
        for n, e in exponents.items():
            i = self.index[n]
            if e < 0 and i not in self.laurent:
                raise ValueError(f"negative exponent on non-Laurent variable {n}")
            m[i] = e
        return Polynomial(self, {tuple(m): S.coerce(coeff)})

    def from_terms(self, terms: Mapping, reduced: bool = False) -> "Polynomial":
        """Build from ``{exponent-tuple or {name: exp}: coefficient}``."""
        out: dict = {}
        for m, c in terms.items():
            if isinstance(m, Mapping):
                mono = [0] * self.nvars
                for n, e in m.items():
                    mono[self.index[n]] = e
                m = tuple(mono)
            _acc(out, tuple(m), S.coerce(c))
        return Polynomial(self, out, reduced)

    def embed(self, p: "Polynomial") -> "Polynomial":
        """Re-express ``p`` in this ring, matching variables by name."""
        if p.ring is self:
            return p
        perm = []
        for n in p.ring.names:
            if n not in self.index:
                perm.append(None)
            else:
                perm.append(self.index[n])
        out: dict = {}
        for m, c in p.terms.items():
            mono = [0] * self.nvars
            for i, e in enumerate(m):
                if e:
                    j = perm[i]
                    if j is None:
                        raise RingMismatch(f"variable {p.ring.names[i]} not in {self.label}")
                    mono[j] = e
            _acc(out, tuple(mono), c)
        return Polynomial(self, out, p.reduced and self.has_lazy_relations)


def _acc(out: dict, m, c):
    prev = out.get(m)
    if prev is None:
        out[m] = c
    else:
        out[m] = (prev[0] + c[0], prev[1] + c[1])


def _float_terms(terms: dict) -> dict:
    return {m: S.to_float_pair(c) for m, c in terms.items()}


def _mixed(a: dict, b: dict):
    ea = all(S.is_exact_pair(c) for c in a.values())
    eb = all(S.is_exact_pair(c) for c in b.values())
    if ea == eb:
        return a, b
    return _float_terms(a), _float_terms(b)


def _mul_terms(a: dict, b: dict) -> dict:
    a, b = _mixed(a, b)
    out: dict = {}
    get = out.get
    b_items = list(b.items())
    for m1, (r1, i1) in a.items():
        if i1 == 0:
            for m2, (r2, i2) in b_items:
                m = tuple(map(add, m1, m2))
                prev = get(m)
                if prev is None:
                    out[m] = (r1 * r2, r1 * i2)
                else:
                    out[m] = (prev[0] + r1 * r2, prev[1] + r1 * i2)
        else:
            for m2, (r2, i2) in b_items:
                m = tuple(map(add, m1, m2))
                re = r1 * r2 - i1 * i2
                im = r1 * i2 + i1 * r2
                prev = get(m)
                if prev is None:
                    out[m] = (re, im)
                else:
                    out[m] = (prev[0] + re, prev[1] + im)
    return {m: c for m, c in out.items() if c[0] != 0 or c[1] != 0}


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps exponent tuples to ``(re, im)``."""

    __slots__ = ("ring", "terms", "reduced")

    def __init__(self, ring: PolyRing, terms: dict, reduced: bool = False):
        terms = {m: c for m, c in terms.items() if c[0] != 0 or c[1] != 0}
        if ring._rules:
            terms = ring._apply_rules(terms, reduced)
        self.ring = ring
        self.terms = terms
        self.reduced = bool(reduced) and ring.has_lazy_relations

    # -- inspection ------------------------------------------------------
    @property
    def exact(self) -> bool:
        return all(S.is_exact_pair(c) for c in self.terms.values())

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_term(self) -> Gaussian:
        c = self.terms.get(self.ring._zero_mono, (S.ZERO, S.ZERO))
        return Gaussian(*c)

    def coefficient(self, **exponents) -> Gaussian:
        m = [0] * self.ring.nvars
        for n, e in exponents.items():
            m[self.ring.index[n]] = e
        c = self.terms.get(tuple(m), (S.ZERO, S.ZERO))
        return Gaussian(*c)

    def variables(self) -> set:
        return {self.ring.names[i] for m in self.terms for i, e in enumerate(m) if e}

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def degree_in(self, names: Iterable[str]) -> int:
        idx = [self.ring.index[n] for n in names]
        return max((sum(m[i] for i in idx) for m in self.terms), default=-1)

    def is_homogeneous(self, names: Iterable[str] | None = None) -> bool:
        idx = range(self.ring.nvars) if names is None else [self.ring.index[n] for n in names]
        degs = {sum(m[i] for i in idx) for m in self.terms}
        return len(degs) <= 1

    def max_abs(self) -> float:
        return max((abs(complex(float(c[0]), float(c[1]))) for c in self.terms.values()), default=0.0)

    # -- normal form -----------------------------------------------------
    def normal_form(self) -> "Polynomial":
        if self.reduced or not self.ring.has_lazy_relations:
            return self
        return Polynomial(self.ring, self.terms, True)

    def _check(self, other: "Polynomial"):
        if other.ring is not self.ring:
            raise RingMismatch(f"{self.ring.label} vs {other.ring.label}")

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return self.ring.const(other)

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        other = self._lift(other)
        a, b = _mixed(self.terms, other.terms)
        out = dict(a)
        for m, c in b.items():
            _acc(out, m, c)
        return Polynomial(self.ring, out, self.reduced or other.reduced)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {m: (-c[0], -c[1]) for m, c in self.terms.items()}, self.reduced)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check(other)
        return Polynomial(self.ring, _mul_terms(self.terms, other.terms), self.reduced or other.reduced)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, value) -> "Polynomial":
        c = S.coerce(value)
        terms = self.terms
        if not S.is_exact_pair(c) and self.exact:
            terms = _float_terms(terms)
        elif S.is_exact_pair(c) and not self.exact:
            c = S.to_float_pair(c)
        return Polynomial(self.ring, {m: S.pair_mul(v, c) for m, v in terms.items()}, self.reduced)

    def __truediv__(self, value):
        if isinstance(value, Polynomial):
            return self * value.inverse()
        return self.scale(S.pair_inv(S.coerce(value)))

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.ring.one()
        if self.reduced:
            result = result.normal_form()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def inverse(self) -> "Polynomial":
        """Inverse of a unit: a single Laurent monomial, or ``a + b*w`` with ``w**2`` eagerly constant."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero polynomial")
        if len(self.terms) == 1:
            (m, c), = self.terms.items()
            if all(e == 0 or i in self.ring.laurent for i, e in enumerate(m)):
                return Polynomial(self.ring, {tuple(-e for e in m): S.pair_inv(c)}, self.reduced)
        # a + b*w where an eager relation w^2 -> constant exists
        for lead, tail, eager, _ in self.ring._rules:
            if not eager:
                continue
            support = [i for i, e in enumerate(lead) if e]
            if len(support) != 1 or lead[support[0]] != 2:
                continue
            if any(any(m) for m in tail):
                continue
            w = support[0]
            if all(all(e == 0 for j, e in enumerate(m) if j != w) for m in self.terms):
                conj = Polynomial(self.ring, {m: ((-c[0], -c[1]) if m[w] else c) for m, c in self.terms.items()})
                norm = self * conj
                if norm.is_constant() and not norm.is_zero():
                    return conj.scale(S.pair_inv(norm.terms[self.ring._zero_mono]))
        raise ZeroDivisionError(f"polynomial is not a unit: {self}")

    def divide_monomial(self, **exponents) -> "Polynomial":
        m = [0] * self.ring.nvars
        for n, e in exponents.items():
            i = self.ring.index[n]
            if i not in self.ring.laurent:
                raise ValueError(f"cannot divide by non-Laurent variable {n}")
            m[i] = e
        return Polynomial(self.ring, {tuple(map(sub, k, m)): c for k, c in self.terms.items()}, self.reduced)

    def conjugate(self) -> "Polynomial":
        conj = self.ring.conj
        out = {}
        for m, (re, im) in self.terms.items():
            out[tuple(m[conj[i]] for i in range(len(m)))] = (re, -im)
        return Polynomial(self.ring, out, self.reduced)

    def real_part(self) -> "Polynomial":
        return (self + self.conjugate()).scale(Q(1, 2))

    def to_float(self) -> "Polynomial":
        return Polynomial(self.ring, _float_terms(self.terms), self.reduced)

    # -- comparison ------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            try:
                other = self.ring.const(other)
            except (TypeError, ValueError):
                return NotImplemented
        if other.ring is not self.ring:
            return False
        a, b = self, other
        if a.reduced != b.reduced:
            a, b = a.normal_form(), b.normal_form()
        return (a - b).is_zero()

    def __hash__(self):
        return hash(frozenset(self.normal_form().terms.items()))

    def equals_on_sphere(self, other) -> bool:
        return (self.normal_form() - self._lift(other)).normal_form().is_zero()

    def close_to(self, other, tol: float) -> bool:
        diff = self - self._lift(other)
        return diff.normal_form().max_abs() <= tol

    # -- evaluation ------------------------------------------------------
    def eval(self, point: Mapping[str, complex], tol: float = 1e-12) -> complex:
        """Numeric value.  Conjugate partners are filled in when only one side is given."""
        values = {}
        for n, x in point.items():
            if n not in self.ring.index:
                raise KeyError(f"unknown variable {n}")
            values[self.ring.index[n]] = complex(x)
        for i, j in enumerate(self.ring.conj):
            if i in values and j in values:
                if abs(values[j] - values[i].conjugate()) > tol * max(1.0, abs(values[i])):
                    raise ValueError(
                        f"non-conjugate assignment to pair ({self.ring.names[i]}, {self.ring.names[j]})")
            elif i in values:
                values[j] = values[i].conjugate()
        for i in range(self.ring.nvars):
            if i == self.ring.conj[i] and i in values and abs(values[i].imag) > tol * max(1.0, abs(values[i])):
                raise ValueError(f"real variable {self.ring.names[i]} assigned a complex value")
        total = 0j
        for m, (re, im) in self.terms.items():
            term = complex(float(re), float(im))
            for i, e in enumerate(m):
                if e:
                    if i not in values:
                        raise KeyError(f"unassigned variable {self.ring.names[i]}")
                    term *= values[i] ** e
            total += term
        return total

    def subs(self, mapping: Mapping[str, object], target: PolyRing | None = None) -> "Polynomial":
        """Substitute variables by polynomials (in ``target``) or scalars."""
        target = target or self.ring
        images = {}
        for n, v in mapping.items():
            i = self.ring.index[n]
            images[i] = v if isinstance(v, Polynomial) else target.const(v)
        keep = {}
        for i, n in enumerate(self.ring.names):
            if i not in images:
                if n not in target.index:
                    keep[i] = None
                else:
                    keep[i] = target.var(n)
        cache: dict = {}

        def power(i, e):
            key = (i, e)
            if key not in cache:
                base = images.get(i) if i in images else keep[i]
                if base is None:
                    raise RingMismatch(f"variable {self.ring.names[i]} has no image in {target.label}")
                cache[key] = base ** e
            return cache[key]

        total = target.zero()
        for m, c in self.terms.items():
            t = target.const(Gaussian(*c) if S.is_exact_pair(c) else complex(*c))
            for i, e in enumerate(m):
                if e:
                    t = t * power(i, e)
            total = total + t
        return total

    # -- serialization ---------------------------------------------------
    def _sorted_items(self):
        return sorted(self.terms.items(), key=lambda kv: (-sum(kv[0]), tuple(-e for e in kv[0])))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self._sorted_items():
            mono = " ".join(
                (n if e == 1 else f"{n}^{e}") for n, e in zip(self.ring.names, m) if e
            )
            coeff = S.format_coeff(c)
            parts.append(f"{coeff} * {mono}" if mono else coeff)
        return " + ".join(parts)

    def __repr__(self):
        return f"Polynomial({self})"

    def to_json(self) -> dict:
        exact = self.exact
        terms = []
        for m, c in self._sorted_items():
            terms.append({
                "monomial": {n: e for n, e in zip(self.ring.names, m) if e},
                "re": S.format_real(c[0]),
                "im": S.format_real(c[1]),
            })
        return {"variables": list(self.ring.names), "exact": exact, "terms": terms}

    @classmethod
    def from_json(cls, ring: PolyRing, data) -> "Polynomial":
        if isinstance(data, str):
            data = json.loads(data)
        conv = S.rational if data.get("exact", True) else float
        terms = {}
        for t in data["terms"]:
            mono = [0] * ring.nvars
            for n, e in t["monomial"].items():
                mono[ring.index[n]] = int(e)
            terms[tuple(mono)] = (conv(t["re"]), conv(t["im"]))
        return Polynomial(ring, terms)


class Derivation:
    """Derivation of a :class:`PolyRing` given by its images on generators."""

    __slots__ = ("ring", "images", "label")

    def __init__(self, ring: PolyRing, images: Mapping[str, Polynomial], label: str = "D"):
        self.ring = ring
        self.images = {}
        for n, p in images.items():
            if not isinstance(p, Polynomial):
                p = ring.const(p)
            if p.ring is not ring:
                raise RingMismatch("derivation image in another ring")
            self.images[ring.index[n]] = p
        self.label = label

    def __repr__(self):
        return f"Derivation({self.label})"

    def image(self, name: str) -> Polynomial:
        return self.images.get(self.ring.index[name], self.ring.zero())

    def __call__(self, p: Polynomial) -> Polynomial:
        return self.apply(p)

    def apply(self, p: Polynomial) -> Polynomial:
        if p.ring is not self.ring:
            raise RingMismatch(f"{self.label} acts on {self.ring.label}, got {p.ring.label}")
        images = self.images
        flt = not p.exact or any(not img.exact for img in images.values())
        out: dict = {}
        get = out.get
        for m, c in p.terms.items():
            if flt:
                c = S.to_float_pair(c)
            for i, e in enumerate(m):
                if not e:
                    continue
                img = images.get(i)
                if img is None:
                    raise KeyError(f"derivation {self.label} undefined on variable {self.ring.names[i]}")
                if not img.terms:
                    continue
                base = list(m)
                base[i] -= 1
                cr, ci = c[0] * e, c[1] * e
                for tm, (tr, ti) in img.terms.items():
                    if flt:
                        tr, ti = float(tr), float(ti)
                    mono = tuple(map(add, base, tm))
                    re = cr * tr - ci * ti
                    im = cr * ti + ci * tr
                    prev = get(mono)
                    out[mono] = (re, im) if prev is None else (prev[0] + re, prev[1] + im)
        return Polynomial(self.ring, out, p.reduced)

    # -- algebra of derivations -----------------------------------------
    def _gens(self):
        return range(self.ring.nvars)

    def __add__(self, other: "Derivation") -> "Derivation":
        names = self.ring.names
        imgs = {names[i]: self.images.get(i, self.ring.zero()) + other.images.get(i, self.ring.zero())
                for i in set(self.images) | set(other.images)}
        return Derivation(self.ring, imgs, f"({self.label}+{other.label})")

    def __sub__(self, other: "Derivation") -> "Derivation":
        return self + other.times(-1)

    def times(self, f) -> "Derivation":
        """Pointwise multiple ``f * D`` (``f`` a scalar or a polynomial)."""
        names = self.ring.names
        if isinstance(f, Polynomial):
            imgs = {names[i]: f * p for i, p in self.images.items()}
        else:
            imgs = {names[i]: p.scale(f) for i, p in self.images.items()}
        return Derivation(self.ring, imgs, f"f*{self.label}")

    def commutator(self, other: "Derivation") -> "Derivation":
        names = self.ring.names
        imgs = {}
        for i in set(self.images) | set(other.images):
            a = self.apply(other.images[i]) if i in other.images else self.ring.zero()
            b = other.apply(self.images[i]) if i in self.images else self.ring.zero()
            imgs[names[i]] = a - b
        return Derivation(self.ring, imgs, f"[{self.label},{other.label}]")

    def equals(self, other: "Derivation", on_sphere: bool = False) -> bool:
        for i in set(self.images) | set(other.images):
            a = self.images.get(i, self.ring.zero())
            b = other.images.get(i, self.ring.zero())
            if on_sphere:
                if not a.equals_on_sphere(b):
                    return False
            elif a != b:
                return False
        return True


# ---------------------------------------------------------------------------
# Standard rings
# ---------------------------------------------------------------------------

def su2_ring(with_radius: bool = False) -> PolyRing:
    names = ["u", "ub", "v", "vb"] + (["r"] if with_radius else [])
    ring = PolyRing(names, [("u", "ub"), ("v", "vb")], laurent=["r"] if with_radius else [],
                    label="SU2xR+" if with_radius else "SU2")
    u, ub = ring.var("u"), ring.var("ub")
    ring.add_relation({"v": 1, "vb": 1}, ring.one() - u * ub, eager=False)
    return ring


SU2 = su2_ring()
SU2R = su2_ring(with_radius=True)
R3 = PolyRing(["x", "y", "z"], label="R3")


def haar_monomial(a: int, b: int, c: int, d: int):
    """Normalized Haar integral of ``u^a ub^b v^c vb^d`` (exact)."""
    if a != b or c != d:
        return S.ZERO
    return Q(math.factorial(a) * math.factorial(c), math.factorial(a + c + 1))


def haar_integral(p: Polynomial) -> Gaussian:
    """Integral over SU(2) against the Haar measure of total mass 1."""
    ring = p.ring
    try:
        iu, iub, iv, ivb = (ring.index[n] for n in ("u", "ub", "v", "vb"))
    except KeyError:
        raise ValueError(f"haar_integral needs the SU(2) variables; ring is {ring.label}") from None
    others = [i for i in range(ring.nvars) if i not in (iu, iub, iv, ivb)]
    total_r, total_i = S.ZERO, S.ZERO
    exact = p.exact
    if not exact:
        total_r, total_i = 0.0, 0.0
    for m, (re, im) in p.terms.items():
        if any(m[i] for i in others):
            raise ValueError("haar_integral: polynomial depends on non-SU(2) variables "
                             + ",".join(ring.names[i] for i in others if m[i]))
        w = haar_monomial(m[iu], m[iub], m[iv], m[ivb])
        if w:
            if not exact:
                w = float(w)
            total_r += w * re
            total_i += w * im
    return Gaussian(total_r, total_i)
