"""Small exact linear algebra over polynomial scalars.

Matrices are lists of rows of :class:`~formqm.polyring.Polynomial`.  Pivots are
inverted with :meth:`Polynomial.inverse`, so elimination works whenever the
entries live in a field (rationals, Gaussian rationals, or a quadratic
extension encoded by an eager relation).  :func:`rank` is fraction-free and
only needs exact zero tests.
"""
from __future__ import annotations

from typing import Sequence

from .polyring import PolyRing, Polynomial

Matrix = list


def zeros(ring: PolyRing, n: int, m: int | None = None) -> Matrix:
    m = n if m is None else m
    return [[ring.zero() for _ in range(m)] for _ in range(n)]


def identity(ring: PolyRing, n: int) -> Matrix:
    out = zeros(ring, n)
    for i in range(n):
        out[i][i] = ring.one()
    return out


def from_scalars(ring: PolyRing, rows) -> Matrix:
    return [[x if isinstance(x, Polynomial) else ring.const(x) for x in row] for row in rows]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    n, k, m = len(a), len(b), len(b[0])
    ring = a[0][0].ring
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = ring.zero()
            for t in range(k):
                if not a[i][t].is_zero() and not b[t][j].is_zero():
                    acc = acc + a[i][t] * b[t][j]
            row.append(acc)
        out.append(row)
    return out


def add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def sub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def scale(a: Matrix, s) -> Matrix:
    return [[x * s for x in row] for row in a]


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)]


def is_zero(a: Matrix) -> bool:
    return all(x.is_zero() for row in a for x in row)


def equal(a: Matrix, b: Matrix) -> bool:
    return len(a) == len(b) and all(
        len(ra) == len(rb) and all(x == y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def rank(rows: Sequence[Sequence[Polynomial]]) -> int:
    """Rank by fraction-free elimination (valid over an integral domain)."""
    work = [list(r) for r in rows]
    if not work:
        return 0
    ncols = len(work[0])
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(work)) if not work[i][c].is_zero()), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        p = work[r][c]
        for i in range(r + 1, len(work)):
            q = work[i][c]
            if q.is_zero():
                continue
            work[i] = [p * x - q * y for x, y in zip(work[i], work[r])]
        r += 1
        if r == len(work):
            break
    return r


def rref(rows: Matrix):
    """Reduced row echelon form; returns ``(matrix, pivot_columns)``."""
    work = [list(r) for r in rows]
    if not work:
        return work, []
    ncols = len(work[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(work)) if not work[i][c].is_zero()), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        inv = work[r][c].inverse()
        work[r] = [x * inv for x in work[r]]
        for i in range(len(work)):
            if i != r and not work[i][c].is_zero():
                f = work[i][c]
                work[i] = [x - f * y for x, y in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    return work, pivots


def nullspace(a: Matrix, ring: PolyRing | None = None) -> list:
    """Basis of ``{x : a x = 0}`` as a list of column vectors."""
    ring = ring or a[0][0].ring
    ncols = len(a[0])
    red, pivots = rref(a)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [ring.zero() for _ in range(ncols)]
        x[f] = ring.one()
        for row, pc in zip(red, pivots):
            x[pc] = -row[f]
        basis.append(x)
    return basis


def solve(a: Matrix, b: Sequence[Polynomial]) -> list:
    """Solve ``a x = b``; raise ``ValueError`` if inconsistent or underdetermined."""
    ncols = len(a[0])
    aug = [list(row) + [bi] for row, bi in zip(a, b)]
    red, pivots = rref(aug)
    if ncols in pivots:
        raise ValueError("inconsistent linear system")
    if len(pivots) < ncols:
        raise ValueError("linear system is underdetermined")
    x = [None] * ncols
    for row, pc in zip(red, pivots):
        x[pc] = row[ncols]
    return x


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    ring = a[0][0].ring
    aug = [list(row) + idrow for row, idrow in zip(a, identity(ring, n))]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red[:n]]


def det(a: Matrix) -> Polynomial:
    """Determinant by cofactor expansion along the sparsest row (small matrices)."""
    n = len(a)
    if n == 1:
        return a[0][0]
    if n == 2:
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]
    ring = a[0][0].ring
    row = min(range(n), key=lambda i: sum(not x.is_zero() for x in a[i]))
    total = ring.zero()
    for j in range(n):
        if a[row][j].is_zero():
            continue
        minor = [[a[i][k] for k in range(n) if k != j] for i in range(n) if i != row]
        term = a[row][j] * det(minor)
        total = total + term if (row + j) % 2 == 0 else total - term
    return total


def adjugate_inverse(a: Matrix) -> Matrix:
    """Inverse via the adjugate; needs only ``det(a)`` to be a unit (works over rings)."""
    n = len(a)
    dinv = det(a).inverse()
    out = zeros(a[0][0].ring, n)
    for i in range(n):
        for j in range(n):
            minor = [[a[r][c] for c in range(n) if c != i] for r in range(n) if r != j]
            cof = det(minor) if n > 1 else a[0][0].ring.one()
            out[i][j] = (cof if (i + j) % 2 == 0 else -cof) * dinv
    return out


def commutator(a: Matrix, b: Matrix) -> Matrix:
    return sub(matmul(a, b), matmul(b, a))
