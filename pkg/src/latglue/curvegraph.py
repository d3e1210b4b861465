"""Dual graphs of (-2)-curves and the elliptic configurations supported on them.

A configuration is a connected set of vertices whose induced graph is an
extended Dynkin diagram.  Its class ``F = sum m_i v_i`` uses the positive
primitive kernel vector of the induced Gram matrix, which reproduces the
standard Kodaira multiplicities.  Fibres with fewer than two components
(types I0, I1, II, III, IV) are invisible to this search.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .dynkin import (affine_kodaira_type, finite_type, isomorphism, kodaira_multiplicities,
                     kodaira_root_type)
from .errors import DomainError, ResourceError, VerificationError
from .lattice import (ADEType, Embedding, IntegerLattice, direct_sum, dynkin_edges,
                      make_ade, make_hyperbolic)
from .linalg import primitive_integer_vector, rational_nullspace, solve_rational

DEFAULT_MAX_GRAPH = 64


@dataclass(frozen=True)
class Vertex:
    label: str
    self_intersection: int = -2
    bold: bool = False


@dataclass(frozen=True)
class CurveGraph:
    vertices: tuple[Vertex, ...]
    edges: tuple[tuple[str, str, int], ...]

    def __post_init__(self):
        labels = [v.label for v in self.vertices]
        if len(set(labels)) != len(labels):
            raise DomainError("vertex labels must be unique")
        known = set(labels)
        seen = set()
        norm = []
        for u, v, w in self.edges:
            if u not in known or v not in known:
                raise DomainError(f"edge ({u}, {v}) uses an unknown vertex")
            if u == v:
                raise DomainError(f"self-loop at {u}")
            if int(w) != w or w < 1:
                raise DomainError(f"edge ({u}, {v}) has invalid weight {w}")
            key = frozenset((u, v))
            if key in seen:
                raise DomainError(f"edge ({u}, {v}) is listed twice")
            seen.add(key)
            norm.append((u, v, int(w)))
        object.__setattr__(self, "edges", tuple(norm))

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(v.label for v in self.vertices)

    @cached_property
    def index(self) -> dict[str, int]:
        return {v.label: i for i, v in enumerate(self.vertices)}

    @cached_property
    def matrix(self) -> tuple[tuple[int, ...], ...]:
        n = len(self.vertices)
        m = [[0] * n for _ in range(n)]
        for i, v in enumerate(self.vertices):
            m[i][i] = v.self_intersection
        for u, v, w in self.edges:
            i, j = self.index[u], self.index[v]
            m[i][j] = m[j][i] = w
        return tuple(map(tuple, m))

    def intersection(self, u: str, v: str) -> int:
        return self.matrix[self.index[u]][self.index[v]]

    @property
    def bold(self) -> tuple[str, ...]:
        return tuple(v.label for v in self.vertices if v.bold)

    def to_json(self) -> dict:
        return {"vertices": [{"label": v.label, "self": v.self_intersection, "bold": v.bold}
                             for v in self.vertices],
                "edges": [[u, v, w] for u, v, w in self.edges]}

    @classmethod
    def from_json(cls, obj: dict) -> "CurveGraph":
        verts = tuple(Vertex(str(v["label"]), int(v.get("self", -2)), bool(v.get("bold", False)))
                      for v in obj["vertices"])
        edges = tuple((str(e[0]), str(e[1]), int(e[2]) if len(e) > 2 else 1) for e in obj["edges"])
        return cls(verts, edges)


def make_graph(labels: Sequence[str], edges: Iterable[tuple], bold: Iterable[str] = ()) -> CurveGraph:
    bold = set(bold)
    verts = tuple(Vertex(x, -2, x in bold) for x in labels)
    return CurveGraph(verts, tuple((e[0], e[1], e[2] if len(e) > 2 else 1) for e in edges))


@dataclass(frozen=True)
class EllipticConfiguration:
    support: tuple[str, ...]
    multiplicities: tuple[int, ...]
    kodaira_type: str

    def coefficient(self, label: str) -> int:
        try:
            return self.multiplicities[self.support.index(label)]
        except ValueError:
            return 0

    def dot_vertex(self, g: CurveGraph, label: str) -> int:
        row = g.matrix[g.index[label]]
        return sum(m * row[g.index[s]] for s, m in zip(self.support, self.multiplicities))

    def dot(self, g: CurveGraph, other: "EllipticConfiguration") -> int:
        return sum(m * other.dot_vertex(g, s) for s, m in zip(self.support, self.multiplicities))


@dataclass(frozen=True)
class OverExceptionalVertexSet:
    vertices: tuple[str, ...]
    spanned_lattice: IntegerLattice


def lattice_from_graph(g: CurveGraph, subset: Sequence[str] | None = None) -> IntegerLattice:
    """Intersection matrix as a (possibly degenerate) lattice."""
    labels = g.labels if subset is None else tuple(subset)
    idx = [g.index[x] for x in labels]
    gram = tuple(tuple(g.matrix[i][j] for j in idx) for i in idx)
    return IntegerLattice(gram, labels, allow_degenerate=True)


def _classify_support(g: CurveGraph, members: Sequence[int]) -> tuple[str, str | None]:
    """('finite', None), ('affine', symbol) or ('none', None) for an induced subgraph."""
    m = g.matrix
    k = len(members)
    pos = {v: i for i, v in enumerate(members)}
    adj = [set() for _ in range(k)]
    double = False
    for a in members:
        for b in members:
            if a < b and m[a][b]:
                w = m[a][b]
                if w == 2 and k == 2:
                    double = True
                elif w != 1:
                    return "none", None
                adj[pos[a]].add(pos[b])
                adj[pos[b]].add(pos[a])
    if double:
        return "affine", "I2"
    if finite_type(adj) is not None:
        return "finite", None
    symbol = affine_kodaira_type(adj)
    if symbol is not None:
        return "affine", symbol
    return "none", None


def _configuration(g: CurveGraph, members: Sequence[int], symbol: str) -> EllipticConfiguration:
    m = g.matrix
    sub = [[m[a][b] for b in members] for a in members]
    ker = rational_nullspace(sub)
    if len(ker) != 1:
        raise VerificationError(f"{symbol} support has a kernel of dimension {len(ker)}")
    mult = primitive_integer_vector(ker[0])
    if mult[0] < 0:
        mult = [-x for x in mult]
    if any(x <= 0 for x in mult):
        raise VerificationError(f"{symbol} multiplicities are not positive")
    if sorted(mult) != kodaira_multiplicities(symbol):
        raise VerificationError(f"{symbol} multiplicities {mult} do not match the standard fibre")
    labels = [g.vertices[v].label for v in members]
    conf = EllipticConfiguration(tuple(labels), tuple(mult), symbol)
    if conf.dot(g, conf) != 0 or any(conf.dot_vertex(g, x) for x in labels):
        raise VerificationError(f"{symbol} class is not numerically a fibre")
    return conf


def find_elliptic_configurations(g: CurveGraph,
                                 max_vertices: int = DEFAULT_MAX_GRAPH) -> list[EllipticConfiguration]:
    """Every vertex set inducing an extended Dynkin diagram, in canonical order.

    Connected induced subsets are grown without repetition (ESU-style) and a
    branch is cut as soon as its induced graph is neither a Dynkin diagram
    nor an extended one; extended diagrams are never extended further.
    """
    n = len(g.vertices)
    if n > max_vertices:
        raise ResourceError(f"graph has {n} vertices, above the cap {max_vertices}",
                            required=n, cap=max_vertices)
    m = g.matrix
    eligible = [g.vertices[i].self_intersection == -2 for i in range(n)]
    nbrs = [{j for j in range(n) if j != i and m[i][j] and eligible[j]} for i in range(n)]
    found: list[tuple[int, ...]] = []
    symbols: dict[tuple[int, ...], str] = {}

    def extend(members: list[int], ext: set[int], root: int):
        for w in sorted(ext):
            ext = ext - {w}
            new = members + [w]
            kind, sym = _classify_support(g, sorted(new))
            if kind == "affine":
                key = tuple(sorted(new))
                symbols[key] = sym
                found.append(key)
                continue
            if kind == "none":
                continue
            covered = set(members)
            for x in members:
                covered |= nbrs[x]
            new_ext = ext | {u for u in nbrs[w] if u > root and u not in covered and u != w}
            extend(new, new_ext, root)

    for v in range(n):
        if eligible[v]:
            extend([v], {u for u in nbrs[v] if u > v}, v)
    out = [_configuration(g, list(key), symbols[key]) for key in sorted(set(found))]
    return out


def orthogonal_vertex_set(g: CurveGraph,
                          configs: Sequence[EllipticConfiguration]) -> OverExceptionalVertexSet:
    """Vertices meeting every given configuration class with intersection 0."""
    if not configs:
        raise DomainError("at least one configuration is required")
    keep = tuple(x for x in g.labels if all(c.dot_vertex(g, x) == 0 for c in configs))
    return OverExceptionalVertexSet(keep, lattice_from_graph(g, keep))


def component_bound_check(g: CurveGraph, fibres: Sequence[EllipticConfiguration]) -> bool:
    """Total number of fibre components is at most ``8 + s`` for ``s`` fibres."""
    seen: set[str] = set()
    for f in fibres:
        for x in f.support:
            if x not in g.index:
                raise DomainError(f"{x} is not a vertex of the graph")
            if x in seen:
                raise DomainError("fibre supports overlap")
            seen.add(x)
    return len(seen) <= 8 + len(fibres)


def fibrations(g: CurveGraph, configs: Sequence[EllipticConfiguration]) -> list[list[EllipticConfiguration]]:
    """Group configurations whose classes are pairwise orthogonal with disjoint supports.

    In a hyperbolic ambient two orthogonal isotropic classes are
    proportional, so orthogonality is an equivalence on configurations.
    """
    groups: list[list[EllipticConfiguration]] = []
    for c in configs:
        for grp in groups:
            if all(c.dot(g, d) == 0 and not set(c.support) & set(d.support) for d in grp):
                grp.append(c)
                break
        else:
            groups.append([c])
    return groups


def halve_if_divisible(v: Sequence[int]) -> tuple[int, ...] | None:
    """``v / 2`` when every ambient coordinate of ``v`` is even, else None."""
    if all(x % 2 == 0 for x in v):
        return tuple(x // 2 for x in v)
    return None


# -----------------------------------------------------------------------------
# realization inside U + (root lattices)

@dataclass(frozen=True)
class GraphRealization:
    ambient: IntegerLattice
    classes: dict
    fibres: tuple[EllipticConfiguration, ...]
    section: str

    def embedding(self, labels: Sequence[str]) -> Embedding:
        return Embedding(self.ambient, tuple(self.classes[x] for x in labels))


def realize_graph(g: CurveGraph, summand_order: Sequence[int] | None = None) -> GraphRealization:
    """Integral classes for every vertex inside ``U + R_1 + ... + R_k``.

    Solver order: the first fibration (in configuration order) that has a
    section meeting each fibre in a multiplicity-one component and whose
    trivial lattice ``U + (non-identity components)`` is unimodular.  The
    fibre class goes to ``u1``, the section to ``u2 - u1``, non-identity
    components to unit vectors of the matching ADE summand (permuted by
    ``summand_order``), and all other vertices are solved exactly from their
    intersection numbers.
    """
    configs = find_elliptic_configurations(g)
    for fib in fibrations(g, configs):
        supp = set().union(*(f.support for f in fib))
        f0 = fib[0]
        for s in g.labels:
            if s in supp or g.vertices[g.index[s]].self_intersection != -2:
                continue
            if f0.dot_vertex(g, s) != 1:
                continue
            try:
                return _realize_with(g, fib, s, summand_order)
            except _NotUnimodular:
                break
    raise DomainError("no fibration with a section and unimodular trivial lattice")


class _NotUnimodular(Exception):
    pass


def _realize_with(g, fib, s, summand_order):
    blocks = []
    for f in fib:
        meets = [x for x in f.support if g.intersection(s, x)]
        if len(meets) != 1 or f.coefficient(meets[0]) != 1 or g.intersection(s, meets[0]) != 1:
            raise _NotUnimodular
        zero = meets[0]
        rest = [x for x in f.support if x != zero]
        blocks.append((f, zero, rest, kodaira_root_type(f.kodaira_type)))
    types = [b[3] for b in blocks]
    disc = 1
    for t in types:
        disc *= make_ade(t).determinant
    if abs(disc) != 1:
        raise _NotUnimodular
    order = list(range(len(blocks))) if summand_order is None else list(summand_order)
    if sorted(order) != list(range(len(blocks))) or any(
            types[i] != types[order[i]] for i in range(len(blocks))):
        raise DomainError("summand order must permute summands of equal type")
    parts = [make_hyperbolic()] + [make_ade(t) for t in types]
    ambient = direct_sum(parts, ["U"] + [f"{t}_{k + 1}" for k, t in enumerate(types)])
    n = ambient.rank
    offsets = [2]
    for t in types:
        offsets.append(offsets[-1] + t.index)

    def unit(i):
        return tuple(int(j == i) for j in range(n))

    classes: dict[str, tuple[int, ...]] = {}
    fibre_class = unit(0)
    classes[s] = tuple(a - b for a, b in zip(unit(1), unit(0)))
    for k, (f, zero, rest, t) in enumerate(blocks):
        slot = order[k]
        idx = {x: i for i, x in enumerate(rest)}
        adj = [{idx[y] for y in rest if y != x and g.intersection(x, y)} for x in rest]
        ref = [set() for _ in range(t.index)]
        for a, b in dynkin_edges(t):
            ref[a].add(b)
            ref[b].add(a)
        iso = isomorphism(adj, ref)
        if iso is None:
            raise VerificationError(f"components of {f.kodaira_type} do not form {t}")
        for x in rest:
            classes[x] = unit(offsets[slot] + iso[idx[x]])
        total = list(fibre_class)
        for x in rest:
            c = f.coefficient(x)
            total = [a - c * b for a, b in zip(total, classes[x])]
        classes[zero] = tuple(total)
    gram = ambient.gram
    basis = [fibre_class, classes[s]] + [classes[x] for b in blocks for x in b[2]]
    pg = [[sum(p[i] * gram[i][j] for i in range(n)) for j in range(n)] for p in basis]
    for x in g.labels:
        if x in classes:
            continue
        rhs = [0, g.intersection(x, s)]
        for b in blocks:
            rhs += [g.intersection(x, y) for y in b[2]]
        # intersection with the fibre class is the intersection with any fibre of it
        rhs[0] = fib[0].dot_vertex(g, x)
        sol = solve_rational(pg, rhs)
        if sol is None or any(Fraction(c).denominator != 1 for c in sol):
            raise VerificationError(f"vertex {x} has no integral class")
        classes[x] = tuple(int(c) for c in sol)
    for x in g.labels:
        for y in g.labels:
            vx, vy = classes[x], classes[y]
            val = sum(vx[i] * gram[i][j] * vy[j] for i in range(n) if vx[i] for j in range(n) if vy[j])
            if val != g.intersection(x, y):
                raise VerificationError(f"realized classes of {x}, {y} meet in {val}")
    return GraphRealization(ambient, classes, tuple(fib), s)


# -----------------------------------------------------------------------------
# built-in figures

def _cycle_graph(labels):
    k = len(labels)
    return [(labels[i], labels[(i + 1) % k]) for i in range(k)]


def figure_catalog() -> dict[str, CurveGraph]:
    """Dual graphs used in the small-configuration exclusions and the K3 example."""
    cat: dict[str, CurveGraph] = {}
    r = [f"R{i}" for i in range(11)]
    cat["e8_a1_a1"] = make_graph(
        r, [(r[i], r[i + 1]) for i in range(8)]
        + [("R3", "R10"), ("R7", "R9"), ("R0", "R7"), ("R8", "R9", 2)])
    r = [f"R{i}" for i in range(10)]
    cat["e7_a1_a1"] = make_graph(
        r, [(r[i], r[i + 1]) for i in range(6)]
        + [("R3", "R8"), ("R5", "R7"), ("R5", "R9"), ("R1", "R9"), ("R6", "R7", 2)])
    r = [f"R{i}" for i in range(1, 12)]
    pairs = [(1, 3), (2, 3), (3, 4), (4, 5), (5, 7), (4, 6), (6, 7), (7, 8), (8, 9), (9, 11),
             (8, 10), (10, 11), (7, 11)]
    cat["d5_d5_a1"] = make_graph(r, [(f"R{a}", f"R{b}") for a, b in pairs], bold=("R1", "R2"))
    cat["dm_a1_a1_triple_star"] = make_graph(
        r, [("R1", "R2"), ("R2", "R3"), ("R2", "R4"), ("R4", "R5"), ("R5", "R6"), ("R6", "R7"),
            ("R7", "R8"), ("R7", "R9"), ("R7", "R10"), ("R3", "R11"), ("R11", "R8"),
            ("R9", "R10", 2)])
    labels = ["R1", "R2", "R3", "C", "R", "R4", "R5", "R6", "R7", "R8", "R9"]
    cat["dm_a1_a1_dihedral_star"] = make_graph(
        labels, [("R1", "R2"), ("R2", "R3"), ("R2", "C"), ("C", "R"), ("R", "R4"), ("R4", "R5"),
                 ("R5", "R6"), ("R5", "R7"), ("R5", "R8"), ("R", "R9"), ("R9", "R5"),
                 ("R7", "R8", 2)], bold=("R1", "R2", "R3"))
    path = ["R_1", "v2", "v3", "v4", "v5", "v6", "v7", "v8", "S_0",
            "v11", "v12", "v13", "v14", "v15", "v16", "v17", "R_2"]
    labels = path[:8] + ["v9"] + path[8:] + ["v19"]
    cat["u_e8_e8"] = make_graph(
        labels, [(path[i], path[i + 1]) for i in range(len(path) - 1)]
        + [("v3", "v9"), ("v16", "v19")],
        bold=("v4", "v6", "v8", "v9", "v11", "v13", "v15", "v19"))
    return cat


def cycle_graph(n: int, prefix: str = "c") -> CurveGraph:
    labels = [f"{prefix}{i}" for i in range(n)]
    return make_graph(labels, _cycle_graph(labels))
