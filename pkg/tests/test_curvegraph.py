from itertools import combinations

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from latglue import curvegraph as cg
from latglue.errors import DomainError, ResourceError
from latglue.glue import saturation
from latglue.lattice import discriminant, inner_product
from latglue.roots import classify_gram
from oracles import count_roots_with_multiplicity

KODAIRA = {
    "II*": [1, 2, 2, 3, 3, 4, 4, 5, 6],
    "III*": [1, 1, 2, 2, 2, 3, 3, 4],
    "IV*": [1, 1, 1, 2, 2, 2, 3],
}

SMALL_FIGURES = ["e8_a1_a1", "e7_a1_a1", "d5_d5_a1", "dm_a1_a1_triple_star", "dm_a1_a1_dihedral_star"]


def _connected(adj, subset):
    subset = set(subset)
    start = next(iter(subset))
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in adj[v] & subset:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == subset


def brute_configurations(g):
    """Connected vertex sets whose Gram is singular negative semidefinite."""
    m = g.matrix
    n = len(m)
    adj = [{j for j in range(n) if j != i and m[i][j]} for i in range(n)]
    out = []
    for k in range(2, n + 1):
        for sub in combinations(range(n), k):
            if not _connected(adj, sub):
                continue
            gram = sympy.Matrix([[m[i][j] for j in sub] for i in sub])
            if gram.det() != 0:
                continue
            # -gram positive semidefinite: no negative eigenvalue
            poly = (-gram).charpoly()
            coeffs = poly.all_coeffs()[::-1]
            zero_mult = next(i for i, c in enumerate(coeffs) if c != 0)
            if count_roots_with_multiplicity(poly, -sympy.oo, 0) == zero_mult:
                out.append(tuple(g.labels[i] for i in sub))
    return sorted(out)


@pytest.mark.parametrize("name", SMALL_FIGURES)
def test_configurations_match_brute_force(name):
    g = cg.figure_catalog()[name]
    found = cg.find_elliptic_configurations(g)
    assert sorted(tuple(sorted(c.support, key=g.labels.index)) for c in found) == \
        [tuple(sorted(s, key=g.labels.index)) for s in brute_configurations(g)]


@pytest.mark.parametrize("name", list(cg.figure_catalog()))
def test_configuration_classes_are_fibres(name):
    g = cg.figure_catalog()[name]
    for c in cg.find_elliptic_configurations(g):
        assert c.dot(g, c) == 0
        assert all(c.dot_vertex(g, x) == 0 for x in c.support)
        mults = sorted(c.multiplicities)
        t = c.kodaira_type
        if t in KODAIRA:
            assert mults == KODAIRA[t]
        elif t.endswith("*"):
            k = int(t[1:-1])
            assert mults == [1] * 4 + [2] * (k + 1)
        else:
            assert mults == [1] * int(t[1:])


@pytest.mark.parametrize("n", [2, 3, 5, 9])
def test_cycles(n):
    if n == 2:
        g = cg.make_graph(["a", "b"], [("a", "b", 2)])
    else:
        g = cg.cycle_graph(n)
    configs = cg.find_elliptic_configurations(g)
    assert [c.kodaira_type for c in configs] == [f"I{n}"]
    assert configs[0].multiplicities == (1,) * n


def test_catalog_shape():
    cat = cg.figure_catalog()
    assert len(cat) == 6
    assert len(cat["d5_d5_a1"].vertices) == 11 and len(cat["d5_d5_a1"].bold) == 2
    assert len(cat["u_e8_e8"].vertices) == 19 and len(cat["u_e8_e8"].bold) == 8


@pytest.mark.parametrize("name, expected", [
    ("e8_a1_a1", ()), ("e7_a1_a1", ()), ("dm_a1_a1_triple_star", ()),
    ("d5_d5_a1", ("R1", "R2")), ("dm_a1_a1_dihedral_star", ("R1", "R2", "R3")),
])
def test_orthogonal_sets(name, expected):
    g = cg.figure_catalog()[name]
    orth = cg.orthogonal_vertex_set(g, cg.find_elliptic_configurations(g))
    assert orth.vertices == expected == g.bold


def test_orthogonal_set_monotone():
    g = cg.figure_catalog()["u_e8_e8"]
    configs = cg.find_elliptic_configurations(g)
    sets = [set(cg.orthogonal_vertex_set(g, configs[:k]).vertices) for k in range(1, len(configs) + 1)]
    for a, b in zip(sets, sets[1:]):
        assert b <= a


def test_orthogonal_set_needs_configs():
    g = cg.cycle_graph(3)
    with pytest.raises(DomainError):
        cg.orthogonal_vertex_set(g, [])


def _two_fibres():
    a = [f"a{i}" for i in range(5)]
    b = [f"b{i}" for i in range(5)]
    edges = [(a[i], a[(i + 1) % 5]) for i in range(5)] + [(b[i], b[(i + 1) % 5]) for i in range(5)]
    return cg.make_graph(a + b, edges)


def test_component_bound_examples():
    g = _two_fibres()
    fibres = cg.find_elliptic_configurations(g)
    assert len(fibres) == 2 and cg.component_bound_check(g, fibres)
    g10 = cg.cycle_graph(10)
    assert not cg.component_bound_check(g10, cg.find_elliptic_configurations(g10))
    assert cg.component_bound_check(g10, [])


def test_component_bound_overlap():
    g = cg.cycle_graph(4)
    c = cg.find_elliptic_configurations(g)[0]
    with pytest.raises(DomainError):
        cg.component_bound_check(g, [c, c])


def test_fibrations_group_orthogonal_classes():
    g = _two_fibres()
    groups = cg.fibrations(g, cg.find_elliptic_configurations(g))
    assert len(groups) == 1 and len(groups[0]) == 2
    u = cg.figure_catalog()["u_e8_e8"]
    kinds = sorted(sorted(c.kodaira_type for c in grp)
                   for grp in cg.fibrations(u, cg.find_elliptic_configurations(u)))
    assert kinds == [["I12*"], ["II*", "II*"]]


@pytest.mark.parametrize("bad", [
    {"vertices": [{"label": "a"}, {"label": "a"}], "edges": []},
    {"vertices": [{"label": "a"}], "edges": [["a", "a", 1]]},
    {"vertices": [{"label": "a"}, {"label": "b"}], "edges": [["a", "c", 1]]},
    {"vertices": [{"label": "a"}, {"label": "b"}], "edges": [["a", "b", 0]]},
    {"vertices": [{"label": "a"}, {"label": "b"}], "edges": [["a", "b", 1], ["b", "a", 1]]},
])
def test_graph_validation(bad):
    with pytest.raises(DomainError):
        cg.CurveGraph.from_json(bad)


def test_graph_json_round_trip():
    g = cg.figure_catalog()["d5_d5_a1"]
    assert cg.CurveGraph.from_json(g.to_json()) == g


def test_graph_cap():
    with pytest.raises(ResourceError):
        cg.find_elliptic_configurations(cg.cycle_graph(10), max_vertices=5)


@pytest.mark.parametrize("order", [None, (1, 0)])
def test_realization_reproduces_graph(order):
    g = cg.figure_catalog()["u_e8_e8"]
    real = cg.realize_graph(g, order)
    assert discriminant(real.ambient) == 1 and tuple(real.ambient.signature) == (1, 17)
    m = g.matrix
    labels = g.labels
    for i, x in enumerate(labels):
        for j, y in enumerate(labels):
            assert inner_product(real.ambient, real.classes[x], real.classes[y]) == m[i][j]


def test_realization_stable_under_summand_swap():
    g = cg.figure_catalog()["u_e8_e8"]
    orth = cg.orthogonal_vertex_set(g, cg.find_elliptic_configurations(g)).vertices
    results = []
    for order in (None, (1, 0)):
        real = cg.realize_graph(g, order)
        emb = real.embedding(orth)
        results.append((saturation(emb)[1], emb.lattice.gram, real.section))
    assert results[0] == results[1]
    assert results[0][0] == 2


def test_halve_if_divisible():
    assert cg.halve_if_divisible([2, -4, 0]) == (1, -2, 0)
    assert cg.halve_if_divisible([2, 1]) is None


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 12))
def test_lattice_from_cycle(n):
    g = cg.cycle_graph(n)
    lat = cg.lattice_from_graph(g, g.labels[:-1])
    assert classify_gram(lat.gram) == (cg.ADEType("A", n - 1),)
