"""Overlattices from isotropic subgroups, saturation, glue vectors and root tests."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations_with_replacement
from typing import Iterable, Sequence

from . import kernels
from .discform import DiscriminantGroup, Element, discriminant_group
from .errors import DomainError, ResourceError, VerificationError
from .lattice import (ADEType, Embedding, IntegerLattice, LatticeVector, direct_sum,
                      discriminant, make_ade, negated)
from .linalg import det, hnf, lcm, saturate_rows
from .roots import classify_gram, enumerate_roots, is_root_lattice

DEFAULT_MAX_DISC_GROUP = 10_000


def max_disc_group() -> int:
    """Enumeration cap on ``|A_L|``; ``GLUE_MAX_DISC_GROUP`` overrides the default."""
    raw = os.environ.get("GLUE_MAX_DISC_GROUP")
    if raw:
        try:
            cap = int(raw)
        except ValueError as exc:
            raise DomainError(f"GLUE_MAX_DISC_GROUP={raw!r} is not an integer") from exc
        if cap <= 0:
            raise DomainError("GLUE_MAX_DISC_GROUP must be positive")
        return cap
    return DEFAULT_MAX_DISC_GROUP


def _check_cap(g: DiscriminantGroup, cap: int | None) -> None:
    cap = max_disc_group() if cap is None else cap
    if g.order > cap:
        raise ResourceError(f"discriminant group of order {g.order} exceeds the cap {cap}",
                            required=g.order, cap=cap)


# -----------------------------------------------------------------------------
# subgroups

def span(g: DiscriminantGroup, gens: Iterable[Element]) -> frozenset[Element]:
    elems = {g.zero}
    for x in gens:
        if x in elems:
            continue
        multiples = [g.zero]
        y = x
        while y != g.zero:
            multiples.append(y)
            y = g.add(y, x)
        elems = {g.add(s, m) for s in elems for m in multiples}
    return frozenset(elems)


def canonical_generators(g: DiscriminantGroup, elems: frozenset[Element]) -> tuple[Element, ...]:
    """Greedy irredundant generating set, scanning elements lexicographically."""
    gens: list[Element] = []
    cur = frozenset({g.zero})
    for x in sorted(elems):
        if len(cur) == len(elems):
            break
        if x not in cur:
            gens.append(x)
            cur = span(g, gens)
    return tuple(gens)


@dataclass(frozen=True)
class IsotropicSubgroup:
    parent: DiscriminantGroup
    generators: tuple[Element, ...]
    elements: frozenset[Element] = field(compare=False, repr=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    @classmethod
    def generated_by(cls, g: DiscriminantGroup, gens: Iterable[Element]) -> "IsotropicSubgroup":
        gens = [g.normalize(x) for x in gens]
        elems = span(g, gens)
        for x in gens:
            if g.q(x) != 0:
                raise DomainError(f"generator {x} is not isotropic")
            for y in gens:
                if g.b(x, y) != 0:
                    raise DomainError(f"generators {x} and {y} are not orthogonal")
        return cls(g, canonical_generators(g, elems), elems)

    def sort_key(self):
        return (self.order, self.generators)


class _Forms:
    """Integer numerators of q and b for fast membership tests."""

    def __init__(self, g: DiscriminantGroup):
        den = 1
        for row in g.generator_gram:
            for v in row:
                den = lcm(den, v.denominator)
        self.den = den
        self.num = [[int(v * den) for v in row] for row in g.generator_gram]

    def b_zero(self, x: Element, y: Element) -> bool:
        k = len(x)
        s = 0
        for i in range(k):
            if x[i]:
                row = self.num[i]
                s += x[i] * sum(row[j] * y[j] for j in range(k) if y[j])
        return s % self.den == 0


def isotropic_elements(g: DiscriminantGroup, cap: int | None = None,
                       backend: str | None = None) -> list[Element]:
    """Elements with ``q = 0 mod 2Z`` in enumeration order (identity first)."""
    _check_cap(g, cap)
    mask = g.isotropic_mask(backend=backend)
    return [e for e, iso in zip(g.elements(), mask) if iso]


def isotropic_subgroups(g: DiscriminantGroup, cap: int | None = None) -> list[IsotropicSubgroup]:
    """Every subgroup on which ``q`` vanishes, sorted by (order, generators)."""
    iso = [x for x in isotropic_elements(g, cap) if any(x)]
    forms = _Forms(g)
    trivial = frozenset({g.zero})
    found = {trivial: ()}
    frontier = [(trivial, ())]
    while frontier:
        nxt = []
        for elems, gens in frontier:
            for x in iso:
                if x in elems or not all(forms.b_zero(x, s) for s in gens):
                    continue
                new = span_extend(g, elems, x)
                if new not in found:
                    cg = canonical_generators(g, new)
                    found[new] = cg
                    nxt.append((new, cg))
        frontier = nxt
    subs = [IsotropicSubgroup(g, gens, elems) for elems, gens in found.items()]
    subs.sort(key=IsotropicSubgroup.sort_key)
    return subs


def span_extend(g: DiscriminantGroup, elems: frozenset[Element], x: Element) -> frozenset[Element]:
    multiples = [g.zero]
    y = x
    while y not in elems:
        multiples.append(y)
        y = g.add(y, x)
    return frozenset(g.add(s, m) for s in elems for m in multiples)


def cyclic_isotropic_subgroups(g: DiscriminantGroup, cap: int | None = None) -> list[IsotropicSubgroup]:
    """Distinct non-trivial subgroups generated by a single isotropic element."""
    seen = {}
    for x in isotropic_elements(g, cap):
        if not any(x):
            continue
        elems = span(g, [x])
        if elems not in seen:
            seen[elems] = IsotropicSubgroup(g, canonical_generators(g, elems), elems)
    return sorted(seen.values(), key=IsotropicSubgroup.sort_key)


# -----------------------------------------------------------------------------
# overlattices

@dataclass(frozen=True)
class OverlatticeResult:
    lattice: IntegerLattice
    index: int
    glue_lifts: tuple[LatticeVector, ...]
    change_of_basis: tuple[tuple[Fraction, ...], ...]
    subgroup: IsotropicSubgroup = field(repr=False)

    def round_trip(self) -> frozenset[Element]:
        """Subgroup of ``A_L`` generated by the classes of the new basis vectors."""
        g = self.subgroup.parent
        return span(g, [g.reduce(row) for row in self.change_of_basis])


def overlattice_from(h: IsotropicSubgroup) -> OverlatticeResult:
    """Adjoin lifts of the generators of ``h``; basis by Hermite completion.

    The new basis is ``HNF(N * I ; N * lifts) / N`` written in the old basis.
    """
    g = h.parent
    for x in h.generators:
        if g.q(x) != 0:
            raise DomainError(f"element {x} is not isotropic")
        for y in h.generators:
            if g.b(x, y) != 0:
                raise DomainError("subgroup is not isotropic")
    old = g.parent
    n = old.rank
    lifts = tuple(g.lift(x) for x in h.generators)
    big = 1
    for v in lifts:
        big = lcm(big, v.denominator_lcm)
    rows = [[big * int(i == j) for j in range(n)] for i in range(n)]
    rows += [[int(big * c) for c in v.coords] for v in lifts]
    basis = hnf(rows)
    if len(basis) != n:
        raise VerificationError("overlattice basis has the wrong rank")
    index = big ** n // abs(det(basis))
    change = tuple(tuple(Fraction(x, big) for x in row) for row in basis)
    gram = _transform_gram(old.gram, change)
    if any(x.denominator != 1 for row in gram for x in row):
        raise VerificationError("overlattice Gram matrix is not integral")
    new_gram = tuple(tuple(int(x) for x in row) for row in gram)
    lat = IntegerLattice(new_gram, tuple(f"f{i + 1}" for i in range(n)))
    if not lat.is_even:
        raise VerificationError("overlattice is not even")
    if index != h.order:
        raise VerificationError("overlattice index differs from the subgroup order")
    if discriminant(old) != index * index * discriminant(lat):
        raise VerificationError("index formula fails")
    return OverlatticeResult(lat, index, lifts, change, h)


def _transform_gram(gram, change):
    n = len(gram)
    gb = [[sum(gram[i][j] * row[j] for j in range(n) if row[j]) for i in range(n)]
          for row in change]
    return [[sum(a * b for a, b in zip(gb[p], change[q])) for q in range(n)]
            for p in range(len(change))]


def overlattices(l: IntegerLattice, cap: int | None = None) -> list[OverlatticeResult]:
    g = discriminant_group(l)
    return [overlattice_from(h) for h in isotropic_subgroups(g, cap)]


# -----------------------------------------------------------------------------
# saturation and primitivity

def saturation(e: Embedding) -> tuple[Embedding, int]:
    """``(L (x) Q) cap M`` with a Hermite basis, and its index over ``L``."""
    sat, factors = saturate_rows(e.basis_images)
    index = 1
    for d in factors:
        index *= d
    return Embedding(e.ambient, tuple(map(tuple, sat)), allow_degenerate=e.allow_degenerate), index


def saturation_quotient(e: Embedding) -> tuple[int, ...]:
    """Invariant factors of ``L_sat / L`` (empty when primitive)."""
    return tuple(saturate_rows(e.basis_images)[1])


def is_primitive(e: Embedding) -> bool:
    return saturation(e)[1] == 1


def coordinates_in(e: Embedding, v: Sequence[int]) -> tuple[Fraction, ...] | None:
    """Rational coordinates of an ambient vector in the basis of ``e``, if it lies in its span."""
    from .linalg import rational_nullspace
    rows = [list(r) for r in e.basis_images]
    k = len(rows)
    if k == 0:
        return () if not any(v) else None
    # solve c^T rows = v via the kernel of [rows; -v]
    aug = [[rows[i][j] for i in range(k)] + [-v[j]] for j in range(len(v))]
    ker = rational_nullspace(aug)
    for w in ker:
        if w[-1] != 0:
            return tuple(x / w[-1] for x in w[:-1])
    return None


# -----------------------------------------------------------------------------
# glue vectors and concentration

def minimal_glue_vector(l: IntegerLattice, v, p: int) -> LatticeVector:
    """Representative of ``v mod L`` with coordinates ``alpha_i / p``, ``0 <= alpha_i < p``."""
    coords = v.coords if isinstance(v, LatticeVector) else tuple(Fraction(x) for x in v)
    if len(coords) != l.rank:
        raise DomainError("vector length does not match the lattice rank")
    if any((p * c).denominator != 1 for c in coords):
        raise DomainError(f"{p} * v is not in the lattice")
    return LatticeVector(tuple(c - (c.numerator // c.denominator) for c in coords))


def concentration_support(l: IntegerLattice, v, p: int) -> Embedding:
    """Sublattice spanned by basis vectors carrying a non-zero coefficient in ``v``."""
    m = minimal_glue_vector(l, v, p)
    if any(c * p != int(c * p) for c in m.coords):
        raise DomainError("glue vector is not p-minimal")
    n = l.rank
    rows = tuple(tuple(int(i == j) for j in range(n)) for i, c in enumerate(m.coords) if c)
    return Embedding(l, rows)


def concentration_type(l: IntegerLattice, v, p: int) -> tuple[ADEType, ...] | None:
    """ADE type of the support when it is a Dynkin sub-diagram of the basis."""
    sub = concentration_support(l, v, p)
    if sub.rank == 0:
        return ()
    return classify_gram(sub.lattice.gram)


def is_a_power(types: Sequence[ADEType], p: int) -> bool:
    """True iff ``types`` is ``A_{p-1}`` repeated at least once."""
    return bool(types) and all(t == ADEType("A", p - 1) for t in types)


# -----------------------------------------------------------------------------
# root overlattices

class LiftSearch:
    """Short lifts of discriminant classes of a negative definite lattice.

    A class ``lambda + L`` is searched through ``y = N (lambda + z)``, which
    ranges over integer vectors congruent to ``N lambda`` mod ``N``.
    """

    def __init__(self, g: DiscriminantGroup):
        if not g.parent.is_negative_definite:
            raise DomainError("lift search needs a negative definite lattice")
        self.group = g
        self.plan = kernels.ShortVectorPlan(negated(g.parent).gram)
        self._root_memo: dict[Element, bool] = {}

    def lifts(self, elem: Element, bound) -> list[LatticeVector]:
        """Lifts ``x`` of the class with ``-x.x <= bound``."""
        lam = self.group.lift(elem)
        big = lam.denominator_lcm
        res = [int(big * c) % big for c in lam.coords]
        scaled = Fraction(bound) * big * big
        ys = kernels.short_vectors(self.plan, int(scaled.numerator // scaled.denominator),
                                   modulus=big, residues=res)
        return [LatticeVector(tuple(Fraction(y, big) for y in vec)) for vec in ys]

    def has_root_lift(self, elem: Element) -> bool:
        if elem not in self._root_memo:
            lam = self.group.lift(elem)
            big = lam.denominator_lcm
            res = [int(big * c) % big for c in lam.coords]
            form = self.plan.gram
            target = 2 * big * big
            ys = kernels.short_vectors(self.plan, target, modulus=big, residues=res)
            self._root_memo[elem] = any(_form(form, y) == target for y in ys)
        return self._root_memo[elem]

    def min_lift_norm(self, elem: Element) -> Fraction:
        """Largest (least negative) norm of a lift of the class."""
        bound = 2
        while True:
            found = self.lifts(elem, bound)
            if found:
                g = self.group.parent.gram
                return max(_form(g, v.coords) for v in found)
            bound *= 2


def _form(g, v):
    n = len(v)
    return sum(v[i] * g[i][j] * v[j] for i in range(n) if v[i] for j in range(n) if v[j])


@dataclass(frozen=True)
class RootCriterion:
    is_root: bool
    root_classes: tuple[Element, ...]
    overlattice: OverlatticeResult


def root_criterion(h: IsotropicSubgroup, search: LiftSearch | None = None) -> RootCriterion:
    """Decide whether the overlattice of ``h`` is a root lattice, two ways.

    The lift route asks whether the classes with a norm -2 lift generate
    ``h``.  The lattice route enumerates the roots of the constructed
    overlattice.  Disagreement raises ``VerificationError``.
    """
    g = h.parent
    if not g.parent.is_negative_definite:
        raise DomainError("root criterion needs a negative definite lattice")
    if not is_root_lattice(g.parent):
        raise DomainError("root criterion needs a root lattice")
    if search is None:
        search = LiftSearch(g)
    over = overlattice_from(h)
    classes = tuple(x for x in sorted(h.elements) if any(x) and search.has_root_lift(x))
    by_lifts = span(g, classes) == h.elements
    by_lattice = is_root_lattice(over.lattice)
    if by_lifts != by_lattice:
        raise VerificationError("lift route and lattice route disagree on rootness")
    return RootCriterion(by_lifts, classes, over)


def overlattice_is_root_lattice(h: IsotropicSubgroup, search: LiftSearch | None = None) -> bool:
    return root_criterion(h, search).is_root


# -----------------------------------------------------------------------------
# scans

EXPECTED_THRESHOLDS = {2: (4, 8), 3: (3, 6), 5: (2, 4)}


@dataclass
class ThresholdRow:
    r: int
    group_order: int
    admits_overlattice: bool | None
    admits_non_root: bool | None
    skipped: bool = False


@dataclass
class ThresholdReport:
    p: int
    r_max: int
    rows: list[ThresholdRow]
    first_overlattice: int | None
    first_non_root: int | None
    expected: tuple[int, int] | None
    partial: bool

    @property
    def matches_expected(self) -> bool | None:
        if self.expected is None:
            return None
        exp_o, exp_n = self.expected
        ok = True
        for row in self.rows:
            if row.skipped:
                continue
            ok &= row.admits_overlattice == (row.r >= exp_o)
            ok &= row.admits_non_root == (row.r >= exp_n)
        return ok


def threshold_scan(p: int, r_max: int, cap: int | None = None) -> ThresholdReport:
    """Which ``A_{p-1}^r`` (``r <= r_max``) admit an overlattice, and a non-root one.

    A non-root overlattice exists iff some isotropic element ``x`` gives a
    non-root ``L[x]``: if ``H`` is non-root, any ``x`` in ``H`` outside the
    span of its root classes already does.  So cyclic subgroups suffice.
    """
    if p < 2 or any(p % k == 0 for k in range(2, p)):
        raise DomainError(f"{p} is not prime")
    if r_max < 1:
        raise DomainError("r_max must be positive")
    cap = max_disc_group() if cap is None else cap
    rows = []
    for r in range(1, r_max + 1):
        order = p ** r
        if order > cap:
            rows.append(ThresholdRow(r, order, None, None, skipped=True))
            continue
        lat = direct_sum([make_ade(ADEType("A", p - 1))] * r)
        g = discriminant_group(lat)
        cyc = cyclic_isotropic_subgroups(g, cap)
        search = LiftSearch(g)
        non_root = any(not overlattice_is_root_lattice(h, search) for h in cyc)
        rows.append(ThresholdRow(r, order, bool(cyc), non_root))
    first_o = next((row.r for row in rows if row.admits_overlattice), None)
    first_n = next((row.r for row in rows if row.admits_non_root), None)
    return ThresholdReport(p, r_max, rows, first_o, first_n, EXPECTED_THRESHOLDS.get(p),
                           any(row.skipped for row in rows))


NO_OVERLATTICE_CASES = (("A6",), ("A6", "A6"), ("A10",), ("A12",))


@dataclass
class NoOverlatticeRow:
    name: str
    group_order: int
    nonzero_isotropic: int


def check_no_overlattice(cases: Sequence[Sequence[str]] = NO_OVERLATTICE_CASES) -> list[NoOverlatticeRow]:
    """Confirm that each lattice has no non-zero isotropic discriminant element."""
    out = []
    for case in cases:
        lat = direct_sum([make_ade(t) for t in case])
        g = discriminant_group(lat)
        count = sum(1 for x in isotropic_elements(g) if any(x))
        row = NoOverlatticeRow("+".join(case), g.order, count)
        out.append(row)
        if count:
            raise VerificationError(f"{row.name} has an isotropic element")
    return out


def root_lattice_catalog(max_rank: int) -> list[tuple[ADEType, ...]]:
    """All multisets of ADE types with total rank between 1 and ``max_rank``."""
    types = ([ADEType("A", n) for n in range(1, max_rank + 1)]
             + [ADEType("D", n) for n in range(4, max_rank + 1)]
             + [ADEType("E", n) for n in (6, 7, 8) if n <= max_rank])
    out = []
    for k in range(1, max_rank + 1):
        for combo in combinations_with_replacement(types, k):
            if sum(t.index for t in combo) <= max_rank:
                out.append(combo)
    return out


@dataclass
class OverlatticeSurvey:
    name: str
    overlattices: int
    non_root: int


def survey_overlattices(types: Sequence[ADEType], cap: int | None = None) -> OverlatticeSurvey:
    """Count the non-trivial overlattices of a root lattice and the non-root ones."""
    lat = direct_sum([make_ade(t) for t in types])
    g = discriminant_group(lat)
    subs = [h for h in isotropic_subgroups(g, cap) if h.order > 1]
    search = LiftSearch(g)
    bad = sum(1 for h in subs if not overlattice_is_root_lattice(h, search))
    return OverlatticeSurvey("+".join(map(str, types)), len(subs), bad)


@dataclass
class SweepReport:
    rank_cap: int
    lattices: int
    overlattices: int
    counterexamples: list[str]


def small_rank_root_overlattice_sweep(rank_cap: int = 7, cap: int | None = None) -> SweepReport:
    """Every overlattice of every root lattice of rank <= ``rank_cap`` is checked for rootness."""
    if rank_cap > 12:
        raise DomainError("rank_cap above 12 is outside the supported range")
    lattices = overl = 0
    bad = []
    for combo in root_lattice_catalog(rank_cap):
        s = survey_overlattices(combo, cap)
        lattices += 1
        overl += s.overlattices
        if s.non_root:
            bad.append(s.name)
    return SweepReport(rank_cap, lattices, overl, bad)
