# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels.  Mirrors ``_kernels_py`` exactly, on 64-bit integers.

The dispatcher in ``kernels.py`` only routes inputs here after checking that
every intermediate fits comfortably in a signed 64-bit integer.
"""

from libc.stdlib cimport malloc, free

ctypedef long long i64


cdef inline i64 floordiv(i64 a, i64 b) nogil:
    # b > 0
    cdef i64 q = a / b
    if (a % b != 0) and (a < 0):
        q -= 1
    return q


cdef inline i64 posmod(i64 a, i64 m) nogil:
    cdef i64 r = a % m
    if r < 0:
        r += m
    return r


cdef inline i64 isqrt64(i64 v) nogil:
    # floor(sqrt(v)) for v >= 0, digit-by-digit
    cdef unsigned long long num = <unsigned long long>v
    cdef unsigned long long res = 0
    cdef unsigned long long bit = (<unsigned long long>1) << 62
    while bit > num:
        bit >>= 2
    while bit != 0:
        if num >= res + bit:
            num -= res + bit
            res = (res >> 1) + bit
        else:
            res >>= 1
        bit >>= 2
    return <i64>res


cdef inline void level_interval(int n, int k, const i64* dets, const i64* schur,
                                i64 bound, const i64* x, i64* lo_out, i64* hi_out) nogil:
    cdef int w = n - k
    cdef const i64* nk = schur + <Py_ssize_t>k * n * n
    cdef i64 b = 0, c = 0, s, xi, a, t, disc, lo, hi, r
    cdef int i, j
    for i in range(1, w):
        xi = x[k + i]
        if xi != 0:
            b += nk[i] * xi
            s = 0
            for j in range(1, w):
                s += nk[i * n + j] * x[k + j]
            c += s * xi
    a = dets[k + 1]
    t = bound * dets[k]
    disc = b * b - a * (c - t)
    if disc < 0:
        lo_out[0] = 1
        hi_out[0] = 0
        return
    r = isqrt64(disc)
    lo = floordiv(-b - r - 1, a)
    hi = -floordiv(b - r - 1, a)
    while lo <= hi and a * lo * lo + 2 * b * lo + c > t:
        lo += 1
    while hi >= lo and a * hi * hi + 2 * b * hi + c > t:
        hi -= 1
    lo_out[0] = lo
    hi_out[0] = hi


def enumerate_short(int n, dets, schur, bound, modulus, residues, limit):
    """See ``_kernels_py.enumerate_short``; ``schur[k]`` is padded into n×n."""
    if n == 0:
        return [()], True
    cdef i64* cd = <i64*>malloc((n + 1) * sizeof(i64))
    cdef i64* cs = <i64*>malloc(<Py_ssize_t>n * n * n * sizeof(i64))
    cdef i64* x = <i64*>malloc(n * sizeof(i64))
    cdef i64* lo = <i64*>malloc(n * sizeof(i64))
    cdef i64* hi = <i64*>malloc(n * sizeof(i64))
    cdef i64* res = <i64*>malloc(n * sizeof(i64))
    cdef int k, i, j
    cdef i64 m = modulus, bnd = bound
    cdef Py_ssize_t lim = limit, count = 0
    cdef bint complete = True
    out = []
    try:
        for k in range(n + 1):
            cd[k] = dets[k]
        for k in range(n):
            for i in range(n):
                for j in range(n):
                    cs[<Py_ssize_t>k * n * n + i * n + j] = 0
            for i in range(n - k):
                for j in range(n - k):
                    cs[<Py_ssize_t>k * n * n + i * n + j] = schur[k][i][j]
        for k in range(n):
            x[k] = 0
            res[k] = posmod(residues[k], m)
        k = n - 1
        level_interval(n, k, cd, cs, bnd, x, &lo[k], &hi[k])
        x[k] = lo[k] + posmod(res[k] - lo[k], m)
        while True:
            if x[k] > hi[k]:
                x[k] = 0
                k += 1
                if k == n:
                    break
                x[k] += m
                continue
            if k == 0:
                out.append(tuple([x[i] for i in range(n)]))
                count += 1
                if count > lim:
                    complete = False
                    break
                x[0] += m
                continue
            k -= 1
            level_interval(n, k, cd, cs, bnd, x, &lo[k], &hi[k])
            x[k] = lo[k] + posmod(res[k] - lo[k], m)
    finally:
        free(cd)
        free(cs)
        free(x)
        free(lo)
        free(hi)
        free(res)
    return out, complete


def q_table(invariants, qnum, modulus):
    """See ``_kernels_py.q_table``."""
    cdef int k = len(invariants)
    cdef i64 mod = modulus
    cdef i64* d = <i64*>malloc(max(k, 1) * sizeof(i64))
    cdef i64* diag = <i64*>malloc(max(k, 1) * sizeof(i64))
    cdef i64* off = <i64*>malloc(max(k * k, 1) * sizeof(i64))
    cdef i64* a = <i64*>malloc(max(k, 1) * sizeof(i64))
    cdef Py_ssize_t total = 1, idx
    cdef int i, j
    cdef i64 s, ai
    try:
        for i in range(k):
            d[i] = invariants[i]
            total *= d[i]
            a[i] = 0
            diag[i] = posmod(qnum[i][i], mod)
            for j in range(k):
                off[i * k + j] = posmod(2 * qnum[i][j], mod)
        out = [0] * total
        for idx in range(total):
            s = 0
            for i in range(k):
                ai = a[i]
                if ai != 0:
                    s = (s + diag[i] * ai % mod * ai) % mod
                    for j in range(i + 1, k):
                        s = (s + off[i * k + j] * ai % mod * a[j]) % mod
            out[idx] = s
            i = k - 1
            while i >= 0:
                a[i] += 1
                if a[i] < d[i]:
                    break
                a[i] = 0
                i -= 1
    finally:
        free(d)
        free(diag)
        free(off)
        free(a)
    return out
