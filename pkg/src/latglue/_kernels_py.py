"""Pure-Python kernels.  Same signatures and results as the compiled ``_kernels``."""

from __future__ import annotations

from itertools import product
from math import isqrt


def enumerate_short(n, dets, schur, bound, modulus, residues, limit):
    """Integer vectors ``y`` with ``y ≡ residues (mod modulus)`` and ``yᵀAy <= bound``.

    ``dets[k]`` is the k-th leading principal minor of the positive definite
    form ``A`` and ``schur[k]`` is ``dets[k]`` times the Schur complement of
    the leading ``k×k`` block, so that the minimum of the form over the first
    ``k`` coordinates (real) is ``tᵀ schur[k] t / dets[k]`` for the tail ``t``.

    Returns ``(vectors, complete)``; ``complete`` is False when more than
    ``limit`` vectors exist.
    """
    out = []
    x = [0] * n
    m = modulus

    def interval(k):
        nk = schur[k]
        w = n - k
        b = 0
        c = 0
        for i in range(1, w):
            xi = x[k + i]
            if xi:
                b += nk[0][i] * xi
                row = nk[i]
                s = 0
                for j in range(1, w):
                    s += row[j] * x[k + j]
                c += s * xi
        a = dets[k + 1]
        t = bound * dets[k]
        disc = b * b - a * (c - t)
        if disc < 0:
            return 1, 0
        s = isqrt(disc)
        lo = (-b - s - 1) // a
        hi = -((b - s - 1) // a)
        while lo <= hi and a * lo * lo + 2 * b * lo + c > t:
            lo += 1
        while hi >= lo and a * hi * hi + 2 * b * hi + c > t:
            hi -= 1
        return lo, hi

    def rec(k):
        lo, hi = interval(k)
        if lo > hi:
            return True
        first = lo + (residues[k] - lo) % m
        for v in range(first, hi + 1, m):
            x[k] = v
            if k == 0:
                out.append(tuple(x))
                if len(out) > limit:
                    return False
            elif not rec(k - 1):
                return False
        x[k] = 0
        return True

    if n == 0:
        return [()], True
    complete = rec(n - 1)
    return out, complete


def q_table(invariants, qnum, modulus):
    """``xᵀ Q x mod modulus`` for every group element in lexicographic order.

    ``qnum`` holds integer numerators; the caller divides by the common
    denominator.  ``modulus`` is twice that denominator.
    """
    k = len(invariants)
    diag = [qnum[i][i] % modulus for i in range(k)]
    off = [[(2 * qnum[i][j]) % modulus for j in range(k)] for i in range(k)]
    out = []
    for a in product(*(range(d) for d in invariants)):
        s = 0
        for i in range(k):
            ai = a[i]
            if ai:
                s += diag[i] * ai * ai
                row = off[i]
                for j in range(i + 1, k):
                    s += row[j] * ai * a[j]
        out.append(s % modulus)
    return out
