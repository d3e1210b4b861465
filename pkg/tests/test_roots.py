import pytest

from latglue.errors import DomainError, ResourceError
from latglue.kernels import BACKEND
from latglue.lattice import ADEType, IntegerLattice, direct_sum, make_ade, make_hyperbolic
from latglue.roots import classify_gram, enumerate_roots, is_root_lattice, root_span
from oracles import box_short_vectors, form

BACKENDS = ["python"] + (["cython"] if BACKEND == "cython" else [])


def closed_count(t: ADEType) -> int:
    n = t.index
    if t.family == "A":
        return n * (n + 1)
    if t.family == "D":
        return 2 * n * (n - 1)
    return {6: 72, 7: 126, 8: 240}[n]


@pytest.mark.parametrize("name", ["A1", "A2", "A3", "D4", "A4"])
def test_roots_match_box_search(name):
    l = make_ade(name)
    pos = [[-x for x in r] for r in l.gram]
    brute = [v for v in box_short_vectors(pos, 2) if form(pos, v, v) == 2]
    assert sorted(enumerate_roots(l).roots) == brute


@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize("name", ["A1", "A7", "D4", "D9", "E6", "E7", "E8"])
def test_counts_and_types(backend, name):
    t = ADEType.parse(name)
    rs = enumerate_roots(make_ade(t), backend=backend)
    assert len(rs.roots) == closed_count(t)
    assert rs.components == (t,)
    assert len(rs.positive_roots) == len(rs.roots) // 2
    # simple roots have a Cartan-type Gram
    sg = rs.simple_gram()
    assert all(sg[i][i] == -2 for i in range(len(sg)))
    assert classify_gram(sg) == (t,)


def test_sum_types_sorted():
    l = direct_sum([make_ade("E6"), make_ade("A2"), make_ade("A1")])
    rs = enumerate_roots(l)
    assert [str(t) for t in rs.components] == ["A1", "A2", "E6"]
    assert len(rs.roots) == 2 + 6 + 72


def test_non_root_lattice():
    # A1 scaled by 2 has no roots; A1 + <-4> is not generated by roots
    l = IntegerLattice(((-4,),))
    assert enumerate_roots(l).roots == ()
    assert not is_root_lattice(l)
    m = direct_sum([make_ade("A1"), l])
    assert not is_root_lattice(m)
    assert root_span(m).rank == 1


def test_root_lattice_examples():
    assert is_root_lattice(make_ade("E8"))
    assert is_root_lattice(direct_sum([make_ade("D4"), make_ade("A2")]))
    assert not is_root_lattice(make_hyperbolic())


def test_domain_and_cap_errors():
    with pytest.raises(DomainError):
        enumerate_roots(make_hyperbolic())
    big = direct_sum([make_ade("A1")] * 5)
    with pytest.raises(ResourceError):
        enumerate_roots(big, max_rank=4)


@pytest.mark.parametrize("gram, expected", [
    ([[-2, 1], [1, -2]], "A2"),
    ([[-2, 0], [0, -2]], "A1 A1"),
    ([[-2, 2], [2, -2]], None),
    ([[-2, 1, 1], [1, -2, 1], [1, 1, -2]], None),
    ([[-4]], None),
])
def test_classify_gram(gram, expected):
    got = classify_gram(gram)
    assert (None if got is None else " ".join(map(str, got))) == expected


@pytest.mark.slow
def test_rank_26_e8_cubed_plus_a2():
    l = direct_sum([make_ade("E8")] * 3 + [make_ade("A2")])
    rs = enumerate_roots(l)
    assert len(rs.roots) == 3 * 240 + 6
