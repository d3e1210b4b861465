"""Hot loops, with the compiled backend selected at import time.

Set ``LATGLUE_PURE_PYTHON=1`` to force the pure-Python fallback.  The
compiled backend works on 64-bit integers, so every call first bounds its
intermediates and silently drops to the arbitrary-precision fallback when the
bound does not fit.
"""

from __future__ import annotations

import os
from math import isqrt
from typing import Sequence

from . import _kernels_py
from .errors import DomainError, ResourceError
from .linalg import rational_inverse

try:
    if os.environ.get("LATGLUE_PURE_PYTHON"):
        raise ImportError("pure python forced")
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

BACKEND = "cython" if _compiled is not None else "python"

_SAFE = 1 << 60


class ShortVectorPlan:
    """Precomputed minors and scaled Schur complements for one positive definite form."""

    def __init__(self, gram: Sequence[Sequence[int]]):
        n = len(gram)
        self.n = n
        self.gram = [list(map(int, r)) for r in gram]
        # Bareiss step k leaves dets[k] * (Schur complement of the leading k×k
        # block) in the trailing block (Sylvester's identity).
        dets = [1]
        schur = []
        cur = [row[:] for row in self.gram]
        prev = 1
        for k in range(n):
            schur.append([row[k:] for row in cur[k:]])
            p = cur[k][k]
            if p <= 0:
                raise DomainError("form is not positive definite")
            dets.append(p)
            nxt = [row[:] for row in cur]
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    nxt[i][j] = (p * cur[i][j] - cur[i][k] * cur[k][j]) // prev
            cur = nxt
            prev = p
        self.dets = dets
        self.schur = schur
        self._inv_diag = ([rational_inverse(self.gram)[i][i] for i in range(n)]
                          if n else [])

    def coordinate_bounds(self, bound: int) -> list[int]:
        return [isqrt(int(bound * d)) + 1 for d in self._inv_diag]

    def fits_int64(self, bound: int, modulus: int) -> bool:
        xs = [x + modulus + 2 for x in self.coordinate_bounds(bound)]
        n = self.n
        worst = 0
        for k in range(n):
            nk = self.schur[k]
            w = n - k
            b = sum(abs(nk[0][i]) * xs[k + i] for i in range(1, w))
            c = sum(abs(nk[i][j]) * xs[k + i] * xs[k + j]
                    for i in range(1, w) for j in range(1, w))
            a = self.dets[k + 1]
            t = bound * self.dets[k]
            worst = max(worst, b * b + a * (c + t), a * xs[k] ** 2 + 2 * b * xs[k] + c + t)
        return worst < _SAFE


def short_vectors(plan: ShortVectorPlan | Sequence[Sequence[int]], bound: int,
                  modulus: int = 1, residues: Sequence[int] | None = None,
                  limit: int = 1_000_000, backend: str | None = None) -> list[tuple[int, ...]]:
    """All ``y ∈ Z^n``, ``y ≡ residues mod modulus``, with ``yᵀAy <= bound``.

    The output is sorted.  ``A`` is the positive definite form of ``plan``.
    """
    if not isinstance(plan, ShortVectorPlan):
        plan = ShortVectorPlan(plan)
    n = plan.n
    if residues is None:
        residues = [0] * n
    if bound < 0:
        return []
    impl = _pick(backend)
    if impl is _compiled and not plan.fits_int64(bound, modulus):
        impl = _kernels_py
    vecs, complete = impl.enumerate_short(n, plan.dets, plan.schur, int(bound), int(modulus),
                                          [int(r) % modulus for r in residues], int(limit))
    if not complete:
        raise ResourceError(f"more than {limit} vectors below bound {bound}", cap=limit)
    return sorted(vecs)


def q_table(invariants: Sequence[int], qnum: Sequence[Sequence[int]], modulus: int,
            backend: str | None = None) -> list[int]:
    impl = _pick(backend)
    if impl is _compiled:
        dmax = max(invariants, default=1)
        if modulus * dmax * dmax * 4 >= _SAFE:
            impl = _kernels_py
    return list(impl.q_table(list(invariants), [list(r) for r in qnum], int(modulus)))


def _pick(backend):
    if backend is None:
        return _compiled if _compiled is not None else _kernels_py
    if backend == "python":
        return _kernels_py
    if backend == "cython":
        if _compiled is None:
            raise ImportError("compiled kernels are not built")
        return _compiled
    raise DomainError(f"unknown backend {backend!r}")
