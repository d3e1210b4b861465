"""Integer lattices given by exact Gram matrices.

Definite root lattices use the negative definite convention throughout:
ADE Gram matrices have ``-2`` on the diagonal and ``+1`` for each edge of the
Dynkin diagram.  ``negated`` converts to the positive definite convention
used by most computer-algebra references.

Basis orderings (glue coordinates depend on them):

* ``A_n``: path ``e1 - e2 - ... - en``.
* ``D_n``: path ``e1 - ... - e(n-2)``, with ``e(n-1)`` and ``en`` both
  attached to ``e(n-2)``.
* ``E_n``: path ``e1 - ... - e(n-1)``, with ``en`` attached to ``e3``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .errors import DomainError
from .linalg import det, integer_kernel, rank as matrix_rank

Gram = tuple[tuple[int, ...], ...]


def _as_gram(rows: Sequence[Sequence[int]]) -> Gram:
    out = []
    for row in rows:
        r = []
        for x in row:
            if isinstance(x, bool) or int(x) != x:
                raise DomainError(f"Gram entry {x!r} is not an integer")
            r.append(int(x))
        out.append(tuple(r))
    return tuple(out)


@dataclass(frozen=True)
class Signature:
    n_plus: int
    n_minus: int
    n_zero: int = 0

    def __iter__(self):
        return iter((self.n_plus, self.n_minus))


@dataclass(frozen=True, order=True)
class ADEType:
    family: str
    index: int

    def __post_init__(self):
        lo, hi = {"A": (1, None), "D": (4, None), "E": (6, 8)}.get(self.family, (None, None))
        if lo is None:
            raise DomainError(f"unknown ADE family {self.family!r}")
        if self.index < lo or (hi is not None and self.index > hi):
            raise DomainError(f"{self.family}{self.index} is outside the valid index range")

    def __str__(self) -> str:
        return f"{self.family}{self.index}"

    @property
    def rank(self) -> int:
        return self.index

    @classmethod
    def parse(cls, text: str) -> "ADEType":
        m = re.fullmatch(r"\s*([ADE])_?(\d+)\s*", text)
        if not m:
            raise DomainError(f"cannot parse ADE type {text!r}")
        return cls(m.group(1), int(m.group(2)))


@dataclass(frozen=True)
class IntegerLattice:
    """A free Z-module with a symmetric integer pairing, stored as its Gram matrix.

    Degenerate pairings are rejected unless ``allow_degenerate`` is set; the
    flag exists for spans of curve configurations that contain whole fibres.
    """

    gram: Gram
    labels: tuple[str, ...] | None = None
    allow_degenerate: bool = field(default=False, compare=False)

    def __post_init__(self):
        g = _as_gram(self.gram)
        object.__setattr__(self, "gram", g)
        n = len(g)
        if any(len(row) != n for row in g):
            raise DomainError("Gram matrix is not square")
        for i in range(n):
            for j in range(i):
                if g[i][j] != g[j][i]:
                    raise DomainError(f"Gram matrix is not symmetric at ({i}, {j})")
        if self.labels is None:
            object.__setattr__(self, "labels", tuple(f"e{i + 1}" for i in range(n)))
        else:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != n:
                raise DomainError("number of labels does not match the rank")
            object.__setattr__(self, "labels", labels)
        if not self.allow_degenerate and self.determinant == 0:
            raise DomainError("Gram matrix is degenerate")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def determinant(self) -> int:
        return det(self.gram)

    @property
    def is_degenerate(self) -> bool:
        return self.determinant == 0

    @property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    @cached_property
    def signature(self) -> Signature:
        return _signature(self.gram)

    @property
    def is_negative_definite(self) -> bool:
        s = self.signature
        return s.n_minus == self.rank

    @property
    def is_positive_definite(self) -> bool:
        return self.signature.n_plus == self.rank

    def rows(self) -> list[list[int]]:
        return [list(r) for r in self.gram]

    def relabel(self, labels: Iterable[str]) -> "IntegerLattice":
        return IntegerLattice(self.gram, tuple(labels), self.allow_degenerate)

    def to_json(self) -> dict:
        return {"rank": self.rank, "gram": self.rows(), "labels": list(self.labels)}

    @classmethod
    def from_json(cls, obj: dict) -> "IntegerLattice":
        gram = obj["gram"]
        if "rank" in obj and obj["rank"] != len(gram):
            raise DomainError("declared rank does not match the Gram matrix")
        labels = obj.get("labels")
        return cls(_as_gram(gram), tuple(labels) if labels else None)


@dataclass(frozen=True)
class LatticeVector:
    """Rational coordinates with respect to a lattice basis."""

    coords: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(Fraction(x) for x in self.coords))

    @property
    def denominator_lcm(self) -> int:
        d = 1
        for x in self.coords:
            q = x.denominator
            d = d * q // _gcd(d, q)
        return d

    @property
    def is_integral(self) -> bool:
        return self.denominator_lcm == 1

    def integral(self) -> tuple[int, ...]:
        if not self.is_integral:
            raise DomainError("vector is not integral")
        return tuple(int(x) for x in self.coords)

    def __add__(self, other: "LatticeVector") -> "LatticeVector":
        return LatticeVector(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "LatticeVector") -> "LatticeVector":
        return LatticeVector(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __rmul__(self, k) -> "LatticeVector":
        return LatticeVector(tuple(k * a for a in self.coords))

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _coords(v) -> tuple[Fraction, ...]:
    if isinstance(v, LatticeVector):
        return v.coords
    return tuple(Fraction(x) for x in v)


@dataclass(frozen=True)
class Embedding:
    """A sublattice given by integer coordinate rows in the ambient basis."""

    ambient: IntegerLattice
    basis_images: tuple[tuple[int, ...], ...]
    allow_degenerate: bool = field(default=False, compare=False)

    def __post_init__(self):
        rows = _as_gram(self.basis_images)
        object.__setattr__(self, "basis_images", rows)
        n = self.ambient.rank
        if any(len(r) != n for r in rows):
            raise DomainError("basis image length does not match the ambient rank")
        if rows and matrix_rank(rows) != len(rows):
            raise DomainError("basis images are linearly dependent")
        if not self.allow_degenerate and rows and self.lattice.is_degenerate:
            raise DomainError("induced Gram matrix is degenerate")

    @property
    def rank(self) -> int:
        return len(self.basis_images)

    @cached_property
    def lattice(self) -> IntegerLattice:
        g = self.ambient.gram
        rows = self.basis_images
        gv = [[sum(g[i][j] * r[j] for j in range(len(r))) for i in range(len(r))] for r in rows]
        gram = tuple(tuple(sum(a * b for a, b in zip(gv[p], rows[q])) for q in range(len(rows)))
                     for p in range(len(rows)))
        return IntegerLattice(gram, allow_degenerate=True)


def make_ade(t: ADEType | str) -> IntegerLattice:
    """Negative definite Gram matrix of an ADE lattice in the documented basis."""
    if isinstance(t, str):
        t = ADEType.parse(t)
    n = t.index
    edges = dynkin_edges(t)
    g = [[0] * n for _ in range(n)]
    for i in range(n):
        g[i][i] = -2
    for i, j in edges:
        g[i][j] = g[j][i] = 1
    return IntegerLattice(_as_gram(g))


def dynkin_edges(t: ADEType) -> list[tuple[int, int]]:
    """Edges of the Dynkin diagram as 0-based index pairs."""
    n = t.index
    if t.family == "A":
        return [(i, i + 1) for i in range(n - 1)]
    if t.family == "D":
        return [(i, i + 1) for i in range(n - 3)] + [(n - 3, n - 2), (n - 3, n - 1)]
    return [(i, i + 1) for i in range(n - 2)] + [(2, n - 1)]


def make_hyperbolic() -> IntegerLattice:
    return IntegerLattice(((0, 1), (1, 0)), ("u1", "u2"))


def direct_sum(ls: Sequence[IntegerLattice], prefixes: Sequence[str] | None = None) -> IntegerLattice:
    """Orthogonal direct sum; labels become ``<prefix>.<label>``."""
    if not ls:
        raise DomainError("direct sum of an empty list")
    if prefixes is None:
        prefixes = [f"L{i + 1}" for i in range(len(ls))]
    if len(prefixes) != len(ls):
        raise DomainError("one prefix per summand is required")
    n = sum(l.rank for l in ls)
    g = [[0] * n for _ in range(n)]
    labels = []
    off = 0
    for pre, l in zip(prefixes, ls):
        for i in range(l.rank):
            for j in range(l.rank):
                g[off + i][off + j] = l.gram[i][j]
        labels.extend(f"{pre}.{x}" for x in l.labels)
        off += l.rank
    return IntegerLattice(_as_gram(g), tuple(labels),
                          allow_degenerate=any(l.allow_degenerate for l in ls))


def discriminant(l: IntegerLattice) -> int:
    return abs(l.determinant)


def signature(l: IntegerLattice) -> Signature:
    return l.signature


def inner_product(l: IntegerLattice, v, w) -> Fraction:
    a, b = _coords(v), _coords(w)
    if len(a) != l.rank or len(b) != l.rank:
        raise DomainError("vector length does not match the lattice rank")
    total = Fraction(0)
    for i, x in enumerate(a):
        if x:
            row = l.gram[i]
            total += x * sum(row[j] * y for j, y in enumerate(b) if y)
    return total


def negated(l: IntegerLattice) -> IntegerLattice:
    """Same module with the pairing multiplied by ``-1``."""
    return IntegerLattice(tuple(tuple(-x for x in r) for r in l.gram), l.labels,
                          l.allow_degenerate)


def orthogonal_complement(ambient: IntegerLattice, sub: Embedding) -> Embedding:
    """Saturated basis of ``{v : v.s = 0 for every basis image s}``."""
    if sub.ambient.gram != ambient.gram:
        raise DomainError("embedding does not live in the given ambient lattice")
    n = ambient.rank
    if sub.rank == 0:
        rows = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    else:
        pairing = [[sum(s[i] * ambient.gram[i][j] for i in range(n)) for j in range(n)]
                   for s in sub.basis_images]
        rows = integer_kernel(pairing, n)
    return Embedding(ambient, tuple(map(tuple, rows)), allow_degenerate=True)


def _signature(gram: Gram) -> Signature:
    """Sylvester inertia by symmetric rational elimination."""
    a = [[Fraction(x) for x in row] for row in gram]
    n = len(a)
    active = list(range(n))
    pos = neg = 0
    while active:
        piv = next((i for i in active if a[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in active for j in active if i != j and a[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            # congruence x_i -> x_i + x_j makes the diagonal entry 2 a_ij
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            piv = i
        p = a[piv][piv]
        if p > 0:
            pos += 1
        else:
            neg += 1
        active.remove(piv)
        row = a[piv]
        for i in active:
            f = a[i][piv]
            if f:
                f = f / p
                ai = a[i]
                for j in active:
                    ai[j] -= f * row[j]
    return Signature(pos, neg, n - pos - neg)


def expected_root_count(t: ADEType) -> int:
    n = t.index
    if t.family == "A":
        return n * (n + 1)
    if t.family == "D":
        return 2 * n * (n - 1)
    return {6: 72, 7: 126, 8: 240}[n]
