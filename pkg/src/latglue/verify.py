"""End-to-end checks: ten-vector model, E6 complement chain, curve-graph examples.

Each ``verify_*``/``check_*`` function returns a plain report object and
raises ``VerificationError`` with a named stage when a computed value
disagrees with the expected one.  ``run_all`` collects them for the CLI.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Sequence

from . import curvegraph as cg
from .discform import discriminant_group, verify_ade_discriminant_table
from .errors import DomainError, VerificationError
from .glue import (IsotropicSubgroup, check_no_overlattice, concentration_support,
                   coordinates_in, is_primitive, isotropic_subgroups, minimal_glue_vector,
                   overlattice_from, saturation, saturation_quotient,
                   small_rank_root_overlattice_sweep, threshold_scan)
from .lattice import (ADEType, Embedding, IntegerLattice, LatticeVector, direct_sum,
                      discriminant, inner_product, make_ade, make_hyperbolic,
                      orthogonal_complement)
from .linalg import solve_rational
from .roots import classify_gram, enumerate_roots, is_root_lattice


def _require(cond: bool, stage: str) -> None:
    if not cond:
        raise VerificationError(stage)


# -----------------------------------------------------------------------------
# ten isotropic vectors with pairwise product 1

@dataclass(frozen=True)
class TenSequenceModel:
    lattice: IntegerLattice
    h_vector: LatticeVector
    f_indices: tuple[int, ...]
    e_indices: tuple[int, ...]
    overlattice: object = field(repr=False)

    def unit(self, i: int) -> LatticeVector:
        return LatticeVector(tuple(Fraction(int(j == i)) for j in range(10)))

    def f(self, i: int) -> LatticeVector:
        return self.unit(self.f_indices[i - 1])

    def e(self, j: int) -> LatticeVector:
        return self.unit(self.e_indices[j - 1])

    def dot(self, v, w) -> Fraction:
        return inner_product(self.lattice, v, w)


def build_ten_sequence_model() -> TenSequenceModel:
    """Gram ``1 - delta_ij`` on ten vectors, with its index-3 unimodular overlattice."""
    gram = tuple(tuple(int(i != j) for j in range(10)) for i in range(10))
    labels = tuple([f"F{i}" for i in range(1, 5)] + [f"E{j}" for j in range(1, 7)])
    lat = IntegerLattice(gram, labels)
    h = LatticeVector((Fraction(1, 3),) * 10)
    g = discriminant_group(lat)
    sub = IsotropicSubgroup.generated_by(g, [g.reduce(h)])
    over = overlattice_from(sub)
    _require(discriminant(lat) == 9, "ten-vector lattice discriminant is not 9")
    _require(sub.order == 3, "H does not have order 3 in the discriminant group")
    _require(discriminant(over.lattice) == 1, "overlattice is not unimodular")
    _require(over.lattice.is_even, "overlattice is not even")
    _require(tuple(over.lattice.signature) == (1, 9), "overlattice signature is not (1, 9)")
    _require(g.reduce(h) in over.round_trip(), "H is not in the overlattice")
    return TenSequenceModel(lat, h, (0, 1, 2, 3), tuple(range(4, 10)), over)


@dataclass
class CandidateCheck:
    name: str
    value: Fraction
    expected: Fraction
    ok: bool


@dataclass
class CandidateReport:
    classes: dict
    checks: list[CandidateCheck]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)


def candidate_classes(model: TenSequenceModel) -> dict[str, LatticeVector]:
    h = model.h_vector
    out: dict[str, LatticeVector] = {}
    for j in range(1, 6):
        out[f"R_{j}"] = model.e(j + 1) - model.e(j)
    for trip in combinations(range(1, 7), 3):
        v = h
        for j in trip:
            v = v - model.e(j)
        out["R_" + ",".join(map(str, trip))] = v
    v = 2 * h
    for j in range(1, 7):
        v = v - model.e(j)
    out["R"] = v
    return out


def candidate_curve_table(model: TenSequenceModel) -> CandidateReport:
    """Norms and pairwise intersections of the 26 candidate classes.

    Raises ``VerificationError`` naming the first pair whose product
    disagrees with its closed form.
    """
    cls = candidate_classes(model)
    checks: list[CandidateCheck] = []

    def add(name, value, expected):
        checks.append(CandidateCheck(name, value, Fraction(expected), value == expected))

    triples = list(combinations(range(1, 7), 3))

    def rt(t):
        return cls["R_" + ",".join(map(str, t))]

    for name, v in cls.items():
        add(f"{name}^2", model.dot(v, v), -2)
    r = cls["R"]
    for j in range(1, 7):
        add(f"R.E_{j}", model.dot(r, model.e(j)), 1)
    for j in range(1, 6):
        add(f"R.R_{j}", model.dot(r, cls[f"R_{j}"]), 0)
    for t in triples:
        add(f"R.R_{t}", model.dot(r, rt(t)), -1)
        for j in range(1, 7):
            add(f"R_{t}.E_{j}", model.dot(rt(t), model.e(j)), int(j in t))
    for j in range(1, 6):
        for k in range(1, 6):
            if j != k:
                exp = 1 if abs(j - k) == 1 else 0
                add(f"R_{j}.R_{k}", model.dot(cls[f"R_{j}"], cls[f"R_{k}"]), exp)
    for t in triples:
        for j in range(1, 6):
            exp = int(j + 1 in t) - int(j in t)
            add(f"R_{t}.R_{j}", model.dot(rt(t), cls[f"R_{j}"]), exp)
    for a, b in combinations(triples, 2):
        add(f"R_{a}.R_{b}", model.dot(rt(a), rt(b)), len(set(a) | set(b)) - 5)
    for t in triples:
        add(f"R_{t}.R_{t}", model.dot(rt(t), rt(t)), len(set(t)) - 5)
    for c in checks:
        if not c.ok:
            raise VerificationError(f"{c.name} = {c.value}, expected {c.expected}")
    return CandidateReport(cls, checks)


# -----------------------------------------------------------------------------
# the E6 complement chain

@dataclass
class ChainReport:
    half_fibre_gram: list[list[int]]
    a2_part_gram: list[list[int]]
    isotropic_order3: int
    order3_orbits: int
    overlattice_disc: int
    overlattice_even: bool
    overlattice_roots: int
    a2_primitive: bool
    glue_saturation_index: int
    complement_rank: int
    complement_disc: int
    complement_roots: int
    complement_types: list[str]
    complement_q: list[str]
    model_complement_rank: int
    model_complement_disc: int
    model_complement_roots: int


def _in_new_basis(change, v):
    """Coordinates of an old-basis vector in the rows of ``change``."""
    sol = solve_rational([list(col) for col in zip(*change)], list(v))
    if sol is None or any(Fraction(c).denominator != 1 for c in sol):
        raise VerificationError("vector is not in the overlattice")
    return tuple(int(c) for c in sol)


def _negate_on(g, elem, block: range):
    """Class of the image of ``elem`` under ``-1`` on the coordinates in ``block``."""
    lift = g.lift(elem).coords
    img = tuple(-c if i in block else c for i, c in enumerate(lift))
    return g.reduce(img)


def verify_e6_complement_chain() -> ChainReport:
    """Embedding ``U + A2`` into ``U + E8`` and its ``E6`` complement, stage by stage."""
    # (a) four half-fibres: U on F1, F2 and an A2 on F1+F2-F3, F3-F4
    four = IntegerLattice(tuple(tuple(int(i != j) for j in range(4)) for i in range(4)))
    uvecs = ((1, 0, 0, 0), (0, 1, 0, 0))
    a2vecs = ((1, 1, -1, 0), (0, 0, 1, -1))
    basis = Embedding(four, uvecs + a2vecs)
    bg = basis.lattice.gram
    _require([list(r[:2]) for r in bg[:2]] == [[0, 1], [1, 0]], "F1, F2 do not span U")
    a2g = [list(r[2:]) for r in bg[2:]]
    _require(a2g == [[-2, 1], [1, -2]], "F1+F2-F3, F3-F4 do not have the A2 Gram")
    _require(all(bg[i][j] == 0 for i in range(2) for j in range(2, 4)), "U and A2 parts are not orthogonal")
    _require(is_primitive(basis) and basis.rank == 4, "U + A2 vectors are not a basis")
    comp = orthogonal_complement(four, Embedding(four, uvecs))
    _require(classify_gram(a2g) == (ADEType("A", 2),) and discriminant(comp.lattice) == 3,
             "complement of U in the half-fibre span is not A2")

    # (b) A2 + E6 and its order-3 overlattice
    a2e6 = direct_sum([make_ade("A2"), make_ade("E6")], ["A2", "E6"])
    g = discriminant_group(a2e6)
    subs = [h for h in isotropic_subgroups(g) if h.order == 3]
    _require(len(subs) >= 1, "A2 + E6 has no isotropic element of order 3")
    # the subgroups are permuted by -1 on the A2 summand
    orbits = []
    for h in subs:
        image = frozenset(_negate_on(g, x, range(0, 2)) for x in h.elements)
        for orb in orbits:
            if image in orb or h.elements in orb:
                orb.add(h.elements)
                orb.add(image)
                break
        else:
            orbits.append({h.elements, image})
    _require(len(orbits) == 1, "order-3 isotropic subgroups form more than one orbit")
    over = overlattice_from(subs[0])
    e8 = over.lattice
    roots = enumerate_roots(e8)
    _require(discriminant(e8) == 1 and e8.is_even and e8.rank == 8, "overlattice is not even unimodular of rank 8")
    _require(len(roots.roots) == 240 and roots.components == (ADEType("E", 8),), "overlattice is not E8")

    # (c) A2 inside that E8 and its complement
    a2_in = Embedding(e8, tuple(_in_new_basis(over.change_of_basis, (int(i == k) for i in range(8)))
                                for k in range(2)))
    sum_in = Embedding(e8, tuple(_in_new_basis(over.change_of_basis, (int(i == k) for i in range(8)))
                                 for k in range(8)))
    _, glue_index = saturation(sum_in)
    _require(glue_index == 3, "A2 + E6 is not of index 3 in its overlattice")
    _require(is_primitive(a2_in), "A2 is not primitive in E8")
    comp = orthogonal_complement(e8, a2_in).lattice
    comp_roots = enumerate_roots(comp)
    cg_ = discriminant_group(comp)
    _require(comp.rank == 6 and discriminant(comp) == 3, "complement of A2 has the wrong rank or discriminant")
    _require(len(comp_roots.roots) == 72 and comp_roots.components == (ADEType("E", 6),),
             "complement of A2 is not E6")
    q_values = sorted({cg_.q(x) for x in cg_.elements() if any(x)})
    _require(cg_.invariant_factors == (3,) and q_values == [Fraction(2, 3)],
             "complement discriminant form is not 2/3")

    # (d) the same complement for the half-fibre span inside the ten-vector model
    model = build_ten_sequence_model()
    ch = model.overlattice.change_of_basis
    fs = tuple(_in_new_basis(ch, (int(i == k) for i in range(10))) for k in range(4))
    num = model.overlattice.lattice
    mcomp = orthogonal_complement(num, Embedding(num, fs)).lattice
    mroots = enumerate_roots(mcomp)
    _require(mcomp.rank == 6 and discriminant(mcomp) == 3 and len(mroots.roots) == 72,
             "complement of the half-fibre span is not E6")
    u_e8 = direct_sum([make_hyperbolic(), e8], ["U", "E8"])
    ua2 = Embedding(u_e8, ((1, 0) + (0,) * 8, (0, 1) + (0,) * 8)
                    + tuple((0, 0) + v for v in a2_in.basis_images))
    ucomp = orthogonal_complement(u_e8, ua2).lattice
    _require(ucomp.rank == 6 and discriminant(ucomp) == 3
             and len(enumerate_roots(ucomp).roots) == 72, "complement of U + A2 in U + E8 is not E6")

    return ChainReport(
        half_fibre_gram=[list(r) for r in four.gram], a2_part_gram=a2g,
        isotropic_order3=len(subs), order3_orbits=len(orbits),
        overlattice_disc=discriminant(e8), overlattice_even=e8.is_even,
        overlattice_roots=len(roots.roots), a2_primitive=True, glue_saturation_index=glue_index,
        complement_rank=comp.rank, complement_disc=discriminant(comp),
        complement_roots=len(comp_roots.roots), complement_types=[str(t) for t in comp_roots.components],
        complement_q=[str(q) for q in q_values], model_complement_rank=mcomp.rank,
        model_complement_disc=discriminant(mcomp), model_complement_roots=len(mroots.roots))


# -----------------------------------------------------------------------------
# predicates for candidate over-exceptional lattices

@dataclass
class OverexceptionalPredicates:
    rank_ok: bool
    primitive_in_num: bool
    pullback_primitive: bool | None
    forbidden: list[str]


def _require_roots(e: Embedding) -> None:
    g = e.lattice.gram
    if any(g[i][i] != -2 for i in range(e.rank)):
        raise DomainError("candidate lattice must be spanned by norm -2 classes")


def forbidden_configuration_scan(e: Embedding) -> list[str]:
    """Sub-configurations of the basis curves that cannot occur: four disjoint
    curves, six curves of type ``A2^3``, six curves of type ``E6``."""
    _require_roots(e)
    g = e.lattice.gram
    k = e.rank
    found = []
    for quad in combinations(range(k), 4):
        if all(g[a][b] == 0 for a, b in combinations(quad, 2)):
            found.append("four disjoint curves")
            break
    seen = set()
    for six in combinations(range(k), 6):
        types = classify_gram([[g[a][b] for b in six] for a in six])
        if types == (ADEType("A", 2),) * 3 and "A2^3" not in seen:
            seen.add("A2^3")
            found.append("six curves spanning A2^3")
        if types == (ADEType("E", 6),) and "E6" not in seen:
            seen.add("E6")
            found.append("six curves spanning E6")
    return found


def enriques_overexceptional_predicates(num: IntegerLattice, eprime: Embedding,
                                        k3_pic: IntegerLattice | None = None,
                                        pullback: Embedding | None = None) -> OverexceptionalPredicates:
    """Rank bound 5, primitivity, and primitivity of the doubled pull-back."""
    if eprime.ambient.gram != num.gram:
        raise DomainError("candidate does not live in the given lattice")
    _require_roots(eprime)
    pb = None
    if pullback is not None:
        if k3_pic is not None and pullback.ambient.gram != k3_pic.gram:
            raise DomainError("pull-back does not live in the given K3 lattice")
        _require_roots(pullback)
        pb = is_primitive(pullback)
    return OverexceptionalPredicates(
        rank_ok=eprime.rank <= 5, primitive_in_num=is_primitive(eprime),
        pullback_primitive=pb, forbidden=forbidden_configuration_scan(eprime))


def k3_overexceptional_check(eprime: Embedding) -> bool:
    """Rank at most 10 and primitive."""
    _require_roots(eprime)
    return eprime.rank <= 10 and is_primitive(eprime)


def a1_four_in_e8() -> Embedding:
    """Four orthogonal roots of a ``D4`` inside ``U + E8``; their sum is divisible by 2."""
    amb = direct_sum([make_hyperbolic(), make_ade("E8")], ["U", "E8"])

    def v(*coeffs):
        return (0, 0) + tuple(coeffs)

    # D4 on e2, e3, e4, e8 with e3 central; its highest root completes the set
    rows = (v(0, 1, 0, 0, 0, 0, 0, 0), v(0, 0, 0, 1, 0, 0, 0, 0), v(0, 0, 0, 0, 0, 0, 0, 1),
            v(0, 1, 2, 1, 0, 0, 0, 1))
    return Embedding(amb, rows)


def primitive_length_obstruction(ambient: IntegerLattice, sub: IntegerLattice) -> bool:
    """True when ``sub`` cannot embed primitively into the unimodular ``ambient``.

    A primitive sublattice of a unimodular lattice has a discriminant group
    isomorphic to that of its complement, so its length is at most
    ``rank(ambient) - rank(sub)``.
    """
    if discriminant(ambient) not in (1, -1):
        raise DomainError("the length bound needs a unimodular ambient lattice")
    return discriminant_group(sub).length > ambient.rank - sub.rank


def primitive_a1_ten() -> Embedding:
    """Ten orthogonal roots spanning a primitive sublattice of ``U + E8 + E8 + A1 + A1``.

    The ambient is even of signature (1, 19).  Four orthogonal simple roots
    from each ``E8`` block and both ``A1`` generators are part of a basis.
    """
    e8 = make_ade("E8")
    a1 = make_ade("A1")
    amb = direct_sum([make_hyperbolic(), e8, e8, a1, a1], ["U", "E8_1", "E8_2", "A1_1", "A1_2"])
    n = amb.rank

    def unit(i):
        return tuple(int(j == i) for j in range(n))

    picks = (0, 3, 5, 7)
    rows = [unit(2 + i) for i in picks] + [unit(10 + i) for i in picks] + [unit(18), unit(19)]
    emb = Embedding(amb, tuple(rows))
    _require(classify_gram(emb.lattice.gram) == (ADEType("A", 1),) * 10, "roots are not orthogonal")
    return emb


# -----------------------------------------------------------------------------
# D8 + D8 example in U + E8 + E8

@dataclass
class PairSaturationReport:
    configurations: list[str]
    orthogonal_vertices: list[str]
    span_types: list[str]
    span_root_types: list[str]
    saturation_index: int
    quotient: list[int]
    glue_vector: list[str]
    concentration_types: list[str]
    concentration_vertices: list[str]
    bold_sum_halvable: bool
    section: str
    saturation_roots: int
    saturation_is_root: bool


def d8_pair_saturation_pipeline(summand_order: Sequence[int] | None = None) -> PairSaturationReport:
    """Realize the 19-curve graph in ``U + E8 + E8`` and measure its orthogonal span."""
    graph = cg.figure_catalog()["u_e8_e8"]
    configs = cg.find_elliptic_configurations(graph)
    kinds = sorted(c.kodaira_type for c in configs)
    _require(kinds == ["I12*", "II*", "II*"], f"unexpected configurations {kinds}")
    orth = cg.orthogonal_vertex_set(graph, configs)
    expected = [x for x in graph.labels if x not in ("S_0", "R_1", "R_2")]
    _require(list(orth.vertices) == expected, "orthogonal vertices are not the 16 unlabelled curves")
    span_types = classify_gram(orth.spanned_lattice.gram)
    _require(span_types == (ADEType("D", 8),) * 2, "orthogonal span is not D8 + D8")
    real = cg.realize_graph(graph, summand_order)
    _require(tuple(real.ambient.signature) == (1, 17) and discriminant(real.ambient) == 1,
             "ambient is not U + E8 + E8")
    emb = real.embedding(orth.vertices)
    _require(emb.lattice.gram == orth.spanned_lattice.gram, "realized Gram differs from the graph")
    span_rs = enumerate_roots(emb.lattice)
    sat, index = saturation(emb)
    quotient = saturation_quotient(emb)
    _require(index == 2 and quotient == (2,), "saturation quotient is not Z/2")
    glue = None
    for row in sat.basis_images:
        c = coordinates_in(emb, row)
        if any(x.denominator != 1 for x in c):
            glue = minimal_glue_vector(emb.lattice, c, 2)
            break
    _require(glue is not None, "no glue vector in the saturation")
    support = concentration_support(emb.lattice, glue, 2)
    conc = classify_gram(support.lattice.gram)
    conc_vertices = [orth.vertices[i] for i, c in enumerate(glue.coords) if c]
    _require(conc == (ADEType("A", 1),) * 8, "glue is not concentrated on A1^8")
    _require(sorted(conc_vertices) == sorted(graph.bold), "concentration is not the bold set")
    total = [0] * real.ambient.rank
    for x in graph.bold:
        total = [a + b for a, b in zip(total, real.classes[x])]
    halvable = cg.halve_if_divisible(total) is not None
    _require(halvable, "sum of bold curves is not divisible by 2")
    sat_rs = enumerate_roots(sat.lattice)
    sat_root = is_root_lattice(sat.lattice, sat_rs)
    _require(not sat_root and len(sat_rs.roots) == len(span_rs.roots),
             "saturation gained roots")
    return PairSaturationReport(
        configurations=kinds, orthogonal_vertices=list(orth.vertices),
        span_types=[str(t) for t in span_types], span_root_types=[str(t) for t in span_rs.components],
        saturation_index=index, quotient=list(quotient), glue_vector=[str(x) for x in glue.coords],
        concentration_types=[str(t) for t in conc], concentration_vertices=conc_vertices,
        bold_sum_halvable=halvable, section=real.section,
        saturation_roots=len(sat_rs.roots), saturation_is_root=sat_root)


# -----------------------------------------------------------------------------
# figure catalog

@dataclass
class FigureRow:
    name: str
    vertices: int
    configurations: int
    orthogonal: list[str]
    bold: list[str]
    ok: bool


def check_figure_catalog() -> list[FigureRow]:
    rows = []
    for name, graph in cg.figure_catalog().items():
        configs = cg.find_elliptic_configurations(graph)
        orth = cg.orthogonal_vertex_set(graph, configs)
        if name == "u_e8_e8":
            expected = [x for x in graph.labels if x not in ("S_0", "R_1", "R_2")]
        else:
            expected = list(graph.bold)
        row = FigureRow(name, len(graph.vertices), len(configs), list(orth.vertices),
                        list(graph.bold), list(orth.vertices) == expected)
        rows.append(row)
        if not row.ok:
            raise VerificationError(f"orthogonal vertices of {name} differ from the expected set")
    return rows


# -----------------------------------------------------------------------------
# aggregate

@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: object


def _table():
    return [asdict(r) for r in verify_ade_discriminant_table()]


def _scan():
    out = []
    for p, r_max in ((2, 10), (3, 7), (5, 4)):
        rep = threshold_scan(p, r_max)
        if not rep.matches_expected:
            raise VerificationError(f"threshold scan for p={p} disagrees")
        out.append({"p": p, "r_max": r_max, "first_overlattice": rep.first_overlattice,
                    "first_non_root": rep.first_non_root, "partial": rep.partial})
    return out


def _sweep():
    rep = small_rank_root_overlattice_sweep(7)
    if rep.counterexamples:
        raise VerificationError(f"non-root overlattices found: {rep.counterexamples}")
    return asdict(rep)


def _candidates():
    rep = candidate_curve_table(build_ten_sequence_model())
    return {"classes": len(rep.classes), "identities": len(rep.checks)}


CHECKS: list[tuple[str, Callable[[], object]]] = [
    ("ade_discriminant_table", _table),
    ("no_overlattice", lambda: [asdict(r) for r in check_no_overlattice()]),
    ("threshold_scan", _scan),
    ("small_rank_sweep", _sweep),
    ("e6_complement_chain", lambda: asdict(verify_e6_complement_chain())),
    ("candidate_curve_table", _candidates),
    ("figure_catalog", lambda: [asdict(r) for r in check_figure_catalog()]),
    ("d8_pair_saturation", lambda: asdict(d8_pair_saturation_pipeline())),
]


def run_all(names: Sequence[str] | None = None) -> list[CheckResult]:
    out = []
    for name, fn in CHECKS:
        if names and name not in names:
            continue
        try:
            out.append(CheckResult(name, True, fn()))
        except VerificationError as exc:
            out.append(CheckResult(name, False, str(exc)))
    return out
