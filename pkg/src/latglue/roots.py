"""Roots (norm -2 vectors) of negative definite lattices and their ADE types."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from . import kernels
from .dynkin import adjacency_from_gram, finite_type
from .errors import DomainError, ResourceError, VerificationError
from .lattice import ADEType, Embedding, IntegerLattice, negated
from .linalg import det, hnf

DEFAULT_MAX_RANK = 26

Vector = tuple[int, ...]


@dataclass(frozen=True)
class RootSystem:
    parent: IntegerLattice
    roots: tuple[Vector, ...]
    simple_roots: tuple[Vector, ...]
    components: tuple[ADEType, ...]

    @property
    def positive_roots(self) -> tuple[Vector, ...]:
        return tuple(r for r in self.roots if _lex_positive(r))

    def simple_gram(self) -> list[list[int]]:
        g = self.parent.gram
        return [[_pair(g, a, b) for b in self.simple_roots] for a in self.simple_roots]


def _pair(g, a, b) -> int:
    return sum(a[i] * g[i][j] * b[j] for i in range(len(a)) if a[i] for j in range(len(b)) if b[j])


def _lex_positive(v: Sequence[int]) -> bool:
    for x in v:
        if x:
            return x > 0
    return False


def enumerate_roots(l: IntegerLattice, max_rank: int = DEFAULT_MAX_RANK,
                    backend: str | None = None) -> RootSystem:
    """All norm -2 vectors by exact short-vector enumeration, plus ADE type.

    Positive roots are the lexicographically positive ones; the simple roots
    are the positive roots that are not a sum of two positive roots.
    """
    if l.rank > max_rank:
        raise ResourceError(f"rank {l.rank} exceeds the cap {max_rank}", required=l.rank,
                            cap=max_rank)
    if l.rank == 0:
        return RootSystem(l, (), (), ())
    if not l.is_negative_definite:
        raise DomainError("root enumeration needs a negative definite lattice")
    form = negated(l).gram
    vecs = kernels.short_vectors(form, 2, backend=backend)
    g = l.gram
    roots = tuple(v for v in vecs if any(v) and _pair(g, v, v) == -2)
    positive = [r for r in roots if _lex_positive(r)]
    pos_set = set(positive)
    simple = []
    for r in positive:
        decomposable = False
        for s in positive:
            t = tuple(a - b for a, b in zip(r, s))
            if t in pos_set:
                decomposable = True
                break
        if not decomposable:
            simple.append(r)
    simple_gram = [[_pair(g, a, b) for b in simple] for a in simple]
    for i in range(len(simple)):
        for j in range(len(simple)):
            if i != j and simple_gram[i][j] not in (0, 1):
                raise VerificationError("simple roots pair outside {0, 1}")
    return RootSystem(l, roots, tuple(simple), _components(simple_gram))


def _components(gram: list[list[int]]) -> tuple[ADEType, ...]:
    adj = adjacency_from_gram(gram)
    n = len(adj)
    seen: set[int] = set()
    out = []
    for s in range(n):
        if s in seen:
            continue
        comp = []
        stack = [s]
        seen.add(s)
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comp.sort()
        idx = {v: k for k, v in enumerate(comp)}
        sub = [{idx[w] for w in adj[v]} for v in comp]
        t = finite_type(sub)
        if t is None:
            raise VerificationError("simple roots do not form a Dynkin diagram")
        out.append(t)
    return tuple(sorted(out))


def ade_classify(rs: RootSystem) -> tuple[ADEType, ...]:
    return rs.components


def classify_gram(gram: Sequence[Sequence[int]]) -> tuple[ADEType, ...] | None:
    """ADE type of a Gram matrix that is already a Dynkin-diagram Gram, else None."""
    n = len(gram)
    if any(gram[i][i] != -2 for i in range(n)):
        return None
    if any(gram[i][j] not in (0, 1) for i in range(n) for j in range(n) if i != j):
        return None
    try:
        return _components([list(r) for r in gram])
    except VerificationError:
        return None


def root_span(l: IntegerLattice, rs: RootSystem | None = None) -> Embedding:
    """Sublattice generated by all roots, with its Hermite basis."""
    if rs is None:
        rs = enumerate_roots(l)
    basis = hnf(list(rs.simple_roots)) if rs.simple_roots else []
    return Embedding(l, tuple(map(tuple, basis)))


def is_root_lattice(l: IntegerLattice, rs: RootSystem | None = None) -> bool:
    """True iff ``l`` is even, negative definite and generated by its roots."""
    if not l.is_even or not l.is_negative_definite:
        return False
    if rs is None:
        rs = enumerate_roots(l)
    if len(rs.simple_roots) != l.rank:
        return False
    return abs(det(rs.simple_roots)) == 1
