"""Exact integer and rational linear algebra on lists of lists.

Everything here works on plain Python ``int`` / ``fractions.Fraction``
entries; nothing ever touches floating point.  Matrices are lists of rows.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(m: Sequence[Sequence]) -> list[list]:
    if not m:
        return []
    return [list(col) for col in zip(*m)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def dot(v: Sequence, w: Sequence):
    return sum(x * y for x, y in zip(v, w))


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``x*a + y*b == g == gcd(a, b) >= 0``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b if a and b else 0


def det(m: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix by Bareiss elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(map(int, row)) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def rational_inverse(m: Sequence[Sequence]) -> list[list[Fraction]]:
    """Inverse over Q by Gauss-Jordan; raises ``ZeroDivisionError`` if singular."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def solve_rational(m: Sequence[Sequence], rhs: Sequence) -> list[Fraction] | None:
    """Solve ``m x = rhs`` over Q for square non-singular ``m``."""
    try:
        inv = rational_inverse(m)
    except ZeroDivisionError:
        return None
    return matvec(inv, [Fraction(x) for x in rhs])


def rank(m: Sequence[Sequence]) -> int:
    if not m:
        return 0
    a = [[Fraction(x) for x in row] for row in m]
    r = 0
    ncols = len(a[0])
    for col in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, len(a)):
            if a[i][col] != 0:
                f = a[i][col] / a[r][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == len(a):
            break
    return r


def rational_nullspace(m: Sequence[Sequence]) -> list[list[Fraction]]:
    """Basis of the right kernel of ``m`` over Q (reduced row echelon)."""
    if not m:
        return []
    a = [[Fraction(x) for x in row] for row in m]
    ncols = len(a[0])
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][col]
        a[r] = [x / p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
        if r == len(a):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -a[i][fc]
        basis.append(v)
    return basis


def primitive_integer_vector(v: Sequence[Fraction]) -> list[int]:
    """Scale a non-zero rational vector to a primitive integer vector."""
    den = 1
    for x in v:
        den = lcm(den, Fraction(x).denominator)
    w = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in w:
        g = gcd(g, x)
    return [x // g for x in w]


# --------------------------------------------------------------------------
# Hermite normal form

def hnf_with_transform(rows: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix]:
    """Row Hermite normal form ``H = U * rows`` with ``U`` unimodular.

    ``H`` has the same number of rows as the input; non-zero rows come
    first, are in echelon form with positive pivots, and entries above each
    pivot are reduced into ``[0, pivot)``.  Trailing rows are zero.
    """
    a = [list(map(int, r)) for r in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    u = identity(m)
    prow = 0
    for col in range(n):
        if prow == m:
            break
        for i in range(prow + 1, m):
            b = a[i][col]
            if b == 0:
                continue
            p = a[prow][col]
            g, x, y = xgcd(p, b)
            pg, bg = p // g, b // g
            rp, ri = a[prow], a[i]
            a[prow] = [x * s + y * t for s, t in zip(rp, ri)]
            a[i] = [-bg * s + pg * t for s, t in zip(rp, ri)]
            up, ui = u[prow], u[i]
            u[prow] = [x * s + y * t for s, t in zip(up, ui)]
            u[i] = [-bg * s + pg * t for s, t in zip(up, ui)]
        p = a[prow][col]
        if p == 0:
            continue
        if p < 0:
            a[prow] = [-x for x in a[prow]]
            u[prow] = [-x for x in u[prow]]
            p = -p
        for i in range(prow):
            q = a[i][col] // p
            if q:
                a[i] = [s - q * t for s, t in zip(a[i], a[prow])]
                u[i] = [s - q * t for s, t in zip(u[i], u[prow])]
        prow += 1
    return a, u


def hnf(rows: Sequence[Sequence[int]]) -> Matrix:
    """Non-zero rows of the row Hermite normal form (a basis of the row span)."""
    if not rows:
        return []
    h, _ = hnf_with_transform(rows)
    return [r for r in h if any(r)]


def integer_kernel(m: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    """Z-basis (as rows) of ``{v in Z^n : m v = 0}``; automatically saturated."""
    if ncols is None:
        ncols = len(m[0])
    if not m:
        return identity(ncols)
    h, u = hnf_with_transform(transpose(m))
    kernel = [u[i] for i, row in enumerate(h) if not any(row)]
    return hnf(kernel) if kernel else []


# --------------------------------------------------------------------------
# Smith normal form

@dataclass(frozen=True)
class SmithDecomposition:
    """``left @ m @ right == diag`` with ``left``, ``right`` unimodular."""

    left: tuple[tuple[int, ...], ...]
    diag: tuple[int, ...]
    right: tuple[tuple[int, ...], ...]

    def diagonal_matrix(self, nrows: int, ncols: int) -> Matrix:
        out = [[0] * ncols for _ in range(nrows)]
        for i, d in enumerate(self.diag):
            out[i][i] = d
        return out


def smith_normal_form(m: Sequence[Sequence[int]]) -> SmithDecomposition:
    """Smith normal form with transformation matrices.

    Pivot rule: smallest non-zero absolute value in the remaining block, ties
    broken by row-major position.  The diagonal satisfies ``d_1 | d_2 | ...``
    and is non-negative; its length is ``min(rows, cols)``.
    """
    a = [list(map(int, r)) for r in m]
    nr = len(a)
    nc = len(a[0]) if nr else 0
    left = identity(nr)
    right = identity(nc)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        left[dst] = [x + q * y for x, y in zip(left[dst], left[src])]

    def add_col(dst, src, q):
        for row in a:
            row[dst] += q * row[src]
        for row in right:
            row[dst] += q * row[src]

    for t in range(min(nr, nc)):
        while True:
            best = None
            for i in range(t, nr):
                for j in range(t, nc):
                    v = a[i][j]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), i, j)
            if best is None:
                break
            _, pi, pj = best
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)
            p = a[t][t]
            clean = True
            for i in range(t + 1, nr):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    clean = clean and a[i][t] == 0
            for j in range(t + 1, nc):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    clean = clean and a[t][j] == 0
            if not clean:
                continue
            bad = next(((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc)
                        if a[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            left[t] = [-x for x in left[t]]
    diag = tuple(a[i][i] for i in range(min(nr, nc)))
    return SmithDecomposition(
        left=tuple(map(tuple, left)), diag=diag, right=tuple(map(tuple, right))
    )


def saturate_rows(rows: Sequence[Sequence[int]]) -> tuple[Matrix, list[int]]:
    """Basis of ``span_Q(rows) ∩ Z^n`` and the invariant factors of the quotient.

    ``rows`` must be linearly independent.  The saturated basis is the first
    ``k`` rows of ``V^{-1}`` where ``U rows V = D``; the index of the row span
    in its saturation is the product of the returned factors.
    """
    k = len(rows)
    if k == 0:
        return [], []
    snf = smith_normal_form(rows)
    if any(d == 0 for d in snf.diag):
        raise ValueError("rows are linearly dependent")
    vinv = unimodular_inverse([list(r) for r in snf.right])
    basis = hnf(vinv[:k])
    return basis, [d for d in snf.diag if d != 1]


def unimodular_inverse(m: Sequence[Sequence[int]]) -> Matrix:
    inv = rational_inverse(m)
    out = []
    for row in inv:
        if any(x.denominator != 1 for x in row):
            raise ValueError("matrix is not unimodular")
        out.append([int(x) for x in row])
    return out
