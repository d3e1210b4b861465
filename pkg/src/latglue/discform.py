"""Discriminant groups ``L^v / L`` with their finite quadratic forms.

Elements are addressed by residue tuples in invariant-factor coordinates:
``a = (a_1, ..., a_k)`` with ``0 <= a_i < d_i`` stands for ``sum a_i g_i``
where ``g_i`` are the stored generator lifts.  Enumeration order is
lexicographic with the first coordinate varying slowest.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import gcd
from typing import Iterator, Sequence

from . import kernels
from .errors import DomainError, VerificationError
from .lattice import ADEType, IntegerLattice, LatticeVector, discriminant, make_ade
from .linalg import lcm, smith_normal_form

Element = tuple[int, ...]


def mod2(x: Fraction) -> Fraction:
    """Representative of ``x`` mod 2Z in ``[0, 2)``."""
    x = Fraction(x)
    return x - 2 * (x.numerator // (2 * x.denominator))


def mod1(x: Fraction) -> Fraction:
    x = Fraction(x)
    return x - (x.numerator // x.denominator)


@dataclass(frozen=True)
class DiscriminantGroup:
    parent: IntegerLattice
    invariant_factors: tuple[int, ...]
    generator_lifts: tuple[LatticeVector, ...]
    # rows of the left SNF transform that survive (d_i > 1)
    _reduce_rows: tuple[tuple[int, ...], ...] = field(repr=False, compare=False, default=())

    @property
    def order(self) -> int:
        o = 1
        for d in self.invariant_factors:
            o *= d
        return o

    @property
    def length(self) -> int:
        return len(self.invariant_factors)

    @property
    def zero(self) -> Element:
        return (0,) * self.length

    @cached_property
    def exponent(self) -> int:
        e = 1
        for d in self.invariant_factors:
            e = lcm(e, d)
        return e

    @cached_property
    def generator_gram(self) -> tuple[tuple[Fraction, ...], ...]:
        """``B_ij = g_i . g_j`` for the generator lifts (exact rationals)."""
        g = self.parent.gram
        lifts = [v.coords for v in self.generator_lifts]
        n = self.parent.rank
        glifts = [[sum(g[i][j] * v[j] for j in range(n) if v[j]) for i in range(n)]
                  for v in lifts]
        return tuple(tuple(sum(a * b for a, b in zip(gv, w)) for w in lifts) for gv in glifts)

    # ---- element arithmetic -------------------------------------------------
    def normalize(self, a: Sequence[int]) -> Element:
        if len(a) != self.length:
            raise DomainError("element has the wrong number of coordinates")
        return tuple(int(x) % d for x, d in zip(a, self.invariant_factors))

    def add(self, a: Element, b: Element) -> Element:
        return tuple((x + y) % d for x, y, d in zip(a, b, self.invariant_factors))

    def neg(self, a: Element) -> Element:
        return tuple((-x) % d for x, d in zip(a, self.invariant_factors))

    def scale(self, k: int, a: Element) -> Element:
        return tuple((k * x) % d for x, d in zip(a, self.invariant_factors))

    def element_order(self, a: Element) -> int:
        o = 1
        for x, d in zip(a, self.invariant_factors):
            o = lcm(o, d // gcd(x, d))
        return o

    def elements(self) -> Iterator[Element]:
        return product(*(range(d) for d in self.invariant_factors))

    def index_of(self, a: Element) -> int:
        idx = 0
        for x, d in zip(a, self.invariant_factors):
            idx = idx * d + x
        return idx

    def lift(self, a: Sequence[int]) -> LatticeVector:
        """The canonical dual-lattice representative ``sum a_i g_i``."""
        a = self.normalize(a)
        n = self.parent.rank
        out = [Fraction(0)] * n
        for ai, v in zip(a, self.generator_lifts):
            if ai:
                for j in range(n):
                    out[j] += ai * v.coords[j]
        return LatticeVector(tuple(out))

    def reduce(self, x) -> Element:
        """Class in ``A_L`` of a dual-lattice vector ``x`` (coordinates in the basis of L)."""
        coords = x.coords if isinstance(x, LatticeVector) else tuple(Fraction(c) for c in x)
        g = self.parent.gram
        n = self.parent.rank
        gx = [sum(g[i][j] * coords[j] for j in range(n)) for i in range(n)]
        if any(Fraction(c).denominator != 1 for c in gx):
            raise DomainError("vector is not in the dual lattice")
        gx = [int(c) for c in gx]
        return tuple(sum(u * c for u, c in zip(row, gx)) % d
                     for row, d in zip(self._reduce_rows, self.invariant_factors))

    # ---- forms -----------------------------------------------------------------
    def q(self, a: Sequence[int]) -> Fraction:
        """Discriminant quadratic form, normalized into ``[0, 2)``."""
        a = self.normalize(a)
        b = self.generator_gram
        k = self.length
        s = sum(b[i][j] * a[i] * a[j] for i in range(k) for j in range(k) if a[i] and a[j])
        return mod2(s)

    def b(self, x: Sequence[int], y: Sequence[int]) -> Fraction:
        """Discriminant bilinear form, normalized into ``[0, 1)``."""
        x, y = self.normalize(x), self.normalize(y)
        b = self.generator_gram
        k = self.length
        s = sum(b[i][j] * x[i] * y[j] for i in range(k) for j in range(k) if x[i] and y[j])
        return mod1(s)

    @cached_property
    def _q_scaled(self) -> tuple[int, list[list[int]]]:
        den = 1
        for row in self.generator_gram:
            for v in row:
                den = lcm(den, v.denominator)
        num = [[int(v * den) for v in row] for row in self.generator_gram]
        return den, num

    def q_values(self, backend: str | None = None) -> list[Fraction]:
        """``q`` of every element, in enumeration order."""
        den, num = self._q_scaled
        raw = kernels.q_table(self.invariant_factors, num, 2 * den, backend=backend)
        return [Fraction(v, den) for v in raw]

    def isotropic_mask(self, backend: str | None = None) -> list[bool]:
        den, num = self._q_scaled
        raw = kernels.q_table(self.invariant_factors, num, 2 * den, backend=backend)
        return [v == 0 for v in raw]


def discriminant_group(l: IntegerLattice) -> DiscriminantGroup:
    """Presentation of ``L^v / L`` from the Smith form ``U G V = D``.

    Generator ``i`` is ``V[:, i] / d_i`` reduced into ``[0, 1)`` coordinate-wise;
    a dual vector ``x`` has class ``(U G x) mod d``.
    """
    if l.is_degenerate:
        raise DomainError("discriminant group of a degenerate lattice")
    n = l.rank
    snf = smith_normal_form(l.gram)
    keep = [i for i, d in enumerate(snf.diag) if d > 1]
    factors = tuple(snf.diag[i] for i in keep)
    lifts = []
    for i in keep:
        d = snf.diag[i]
        lifts.append(LatticeVector(tuple(mod1(Fraction(snf.right[j][i], d)) for j in range(n))))
    rows = tuple(snf.left[i] for i in keep)
    group = DiscriminantGroup(l, factors, tuple(lifts), rows)
    if group.order != discriminant(l):
        raise VerificationError("group order differs from the discriminant")
    return group


def q_value(g: DiscriminantGroup, elem: Sequence[int]) -> Fraction:
    return g.q(elem)


def b_value(g: DiscriminantGroup, x: Sequence[int], y: Sequence[int]) -> Fraction:
    return g.b(x, y)


def group_length(g: DiscriminantGroup) -> int:
    return g.length


# -----------------------------------------------------------------------------
# Closed forms for ADE lattices

@dataclass
class TableRow:
    lattice: str
    expected_group: tuple[int, ...]
    computed_group: tuple[int, ...]
    expected_form: tuple[tuple[Fraction, ...], ...]
    computed_form: tuple[tuple[Fraction, ...], ...] | None
    generators: tuple[Element, ...] | None
    ok: bool


def ade_form_closed(t: ADEType) -> tuple[tuple[int, ...], tuple[tuple[Fraction, ...], ...]]:
    """Expected group and Gram of ``q``/``b`` on a generating set (raw values).

    Diagonal entries are ``q`` values mod 2, off-diagonal entries ``b`` values
    mod 1.  A trivial group has an empty form.
    """
    n = t.index
    if t.family == "A":
        return (n + 1,), ((Fraction(-n, n + 1),),)
    if t.family == "D":
        if n % 2 == 0:
            m = n // 2
            return (2, 2), ((Fraction(1), Fraction(1, 2)), (Fraction(1, 2), Fraction(-m, 2)))
        m = (n - 1) // 2
        return (4,), ((Fraction(-(2 * m + 1), 4),),)
    return {6: ((3,), ((Fraction(2, 3),),)),
            7: ((2,), ((Fraction(1, 2),),)),
            8: ((), ())}[n]


def _normalize_form(form) -> tuple[tuple[Fraction, ...], ...]:
    k = len(form)
    return tuple(tuple(mod2(form[i][j]) if i == j else mod1(form[i][j]) for j in range(k))
                 for i in range(k))


def match_form(g: DiscriminantGroup, form) -> tuple[Element, ...] | None:
    """A generating tuple of ``g`` on which ``q``/``b`` take the given values.

    The search runs over tuples of elements whose orders match the cyclic
    factors of ``g``; this absorbs the freedom in choosing generators.
    """
    target = _normalize_form(form)
    k = len(target)
    if k != g.length:
        return None
    if k == 0:
        return ()
    elems = list(g.elements())
    by_order: dict[int, list[Element]] = {}
    for e in elems:
        by_order.setdefault(g.element_order(e), []).append(e)
    pools = [by_order.get(d, []) for d in g.invariant_factors]

    def spans_all(gens):
        seen = {g.zero}
        frontier = [g.zero]
        while frontier:
            nxt = []
            for x in frontier:
                for s in gens:
                    y = g.add(x, s)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return len(seen) == g.order

    for cand in product(*pools):
        ok = all(g.q(cand[i]) == target[i][i] for i in range(k)) and all(
            g.b(cand[i], cand[j]) == target[i][j] for i in range(k) for j in range(i + 1, k))
        if ok and spans_all(cand):
            return tuple(cand)
    return None


def ade_table_types(a_max: int = 12, d_max: int = 12) -> list[ADEType]:
    return ([ADEType("A", n) for n in range(1, a_max + 1)]
            + [ADEType("D", n) for n in range(4, d_max + 1)]
            + [ADEType("E", n) for n in (6, 7, 8)])


def verify_ade_discriminant_table(a_max: int = 12, d_max: int = 12) -> list[TableRow]:
    """Compare computed discriminant forms of ADE lattices with their closed forms.

    Raises ``VerificationError`` naming the first lattice that disagrees.
    """
    rows = []
    for t in ade_table_types(a_max, d_max):
        grp = discriminant_group(make_ade(t))
        exp_group, exp_form = ade_form_closed(t)
        gens = match_form(grp, exp_form) if grp.invariant_factors == exp_group else None
        computed = None
        if gens is not None:
            k = len(gens)
            computed = tuple(tuple(grp.q(gens[i]) if i == j else grp.b(gens[i], gens[j])
                                   for j in range(k)) for i in range(k))
        ok = grp.invariant_factors == exp_group and gens is not None
        rows.append(TableRow(str(t), exp_group, grp.invariant_factors,
                             _normalize_form(exp_form), computed, gens, ok))
        if not ok:
            raise VerificationError(f"discriminant form of {t} does not match its closed form")
    return rows
