"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line."""

import time
from contextlib import contextmanager
from math import lcm

import pytest

from catalog import CATALOG
from latglue import curvegraph as cg
from latglue import glue, verify
from latglue.discform import discriminant_group, verify_ade_discriminant_table
from latglue.kernels import BACKEND
from latglue.lattice import ADEType, direct_sum, discriminant, make_ade
from latglue.linalg import hnf
from latglue.roots import enumerate_roots

BACKENDS = ["python"] + (["cython"] if BACKEND == "cython" else [])


@pytest.fixture
def report(capsys):
    @contextmanager
    def run(number, title, limit):
        start = time.perf_counter()
        status, note = "FAIL", ""
        try:
            yield
            elapsed = time.perf_counter() - start
            if limit is not None and elapsed > limit:
                note = f" (took {elapsed:.1f}s, limit {limit}s)"
                raise AssertionError(f"criterion {number} exceeded its {limit}s limit: {elapsed:.1f}s")
            status = "PASS"
            note = f" ({elapsed:.2f}s)"
        finally:
            with capsys.disabled():
                print(f"\n[{status}] criterion {number}: {title}{note}")
    return run


def _is_prime(p):
    return p > 1 and all(p % d for d in range(2, p))


def test_01_discriminant_table(report):
    with report(1, "discriminant groups and forms of A1-A12, D4-D12, E6-E8", 5):
        rows = verify_ade_discriminant_table(12, 12)
        names = [r.lattice for r in rows]
        assert names == ([f"A{n}" for n in range(1, 13)] + [f"D{n}" for n in range(4, 13)]
                         + ["E6", "E7", "E8"])
        assert all(r.ok and r.computed_group == r.expected_group for r in rows)


def test_02_index_formula(report):
    with report(2, "disc(L) = disc(L') [L':L]^2 on every catalog overlattice", 10):
        count = 0
        for name, make in CATALOG.items():
            lat = make()
            if discriminant(lat) > 200:
                continue
            for res in glue.overlattices(lat):
                assert discriminant(lat) == discriminant(res.lattice) * res.index ** 2, name
                count += 1
        assert count >= 50


def test_03_subgroup_bijection(report):
    with report(3, "overlattices correspond to isotropic subgroups, round trip exact", 60):
        for name, make in CATALOG.items():
            lat = make()
            g = discriminant_group(lat)
            if g.order > 3000:
                continue
            subs = glue.isotropic_subgroups(g)
            results = [glue.overlattice_from(h) for h in subs]
            assert len(results) == len(subs), name
            # distinct subgroups give distinct overlattices
            keys = set()
            for res in results:
                n = 1
                for row in res.change_of_basis:
                    for x in row:
                        n = lcm(n, x.denominator)
                rows = [[int(x * n) for x in row] for row in res.change_of_basis]
                keys.add(tuple(map(tuple, hnf(rows))))
                assert res.round_trip() == res.subgroup.elements, name
            assert len(keys) == len(subs), name


def test_04_thresholds(report):
    with report(4, "A1^r r>=4/8, A2^r r>=3/6, A4^r r>=2/4; A6, A6+A6, A10, A12 have none", 300):
        for p, r_max, expected in ((2, 10, (4, 8)), (3, 7, (3, 6)), (5, 4, (2, 4))):
            rep = glue.threshold_scan(p, r_max)
            assert not rep.partial
            assert (rep.first_overlattice, rep.first_non_root) == expected
            for row in rep.rows:
                assert row.admits_overlattice == (row.r >= expected[0])
                assert row.admits_non_root == (row.r >= expected[1])
        rows = glue.check_no_overlattice()
        assert [r.nonzero_isotropic for r in rows] == [0, 0, 0, 0]


def test_05_small_rank_sweep(report):
    with report(5, "every overlattice of every root lattice of rank <= 7 is a root lattice", 600):
        rep = glue.small_rank_root_overlattice_sweep(7)
        assert rep.lattices == len(glue.root_lattice_catalog(7))
        assert rep.counterexamples == []


def test_06_concentration(report):
    with report(6, "prime-index glue concentrates on A_{p-1}^r; A_{pr-1} zero positions", None):
        checked = 0
        for name, make in CATALOG.items():
            lat = make()
            if not lat.is_negative_definite:
                continue
            for res in glue.overlattices(lat):
                p = res.index
                if not _is_prime(p):
                    continue
                g = res.subgroup.parent
                for x in res.subgroup.elements:
                    if not any(x):
                        continue
                    types = glue.concentration_type(lat, g.lift(x), p)
                    assert types is not None and glue.is_a_power(types, p), (name, x, types)
                    checked += 1
        assert checked > 0
        for p, r in ((2, 2), (2, 3), (2, 5), (3, 2), (3, 4), (5, 2), (5, 3), (7, 2), (11, 2)):
            n = p * r - 1
            lat = make_ade(ADEType("A", n))
            e = discriminant_group(lat).lift((1,))
            for m in range(1, p):
                v = glue.minimal_glue_vector(lat, (m * r) * e, p)
                zeros = [i + 1 for i, c in enumerate(v.coords) if c == 0]
                assert zeros == [k * p for k in range(1, r)]
                assert glue.concentration_type(lat, v, p) == (ADEType("A", p - 1),) * r


def test_07_e6_chain(report):
    title = ("A2+E6 has one index-3 overlattice up to the isometry -1 on A2 "
             "(two subgroups, one orbit); E8, 240 roots; complement rank 6, disc 3, 72 roots, q = 2/3")
    with report(7, title, 30):
        lat = direct_sum([make_ade("A2"), make_ade("E6")])
        g = discriminant_group(lat)
        index3 = [res for res in glue.overlattices(lat) if res.index == 3]
        assert len(index3) == 2
        # the isometry -1 on the A2 summand carries one overlattice onto the other
        first, second = index3
        for v in first.glue_lifts:
            image = tuple(-c if i < 2 else c for i, c in enumerate(v.coords))
            assert g.reduce(image) in second.subgroup.elements
        for res in index3:
            over = res.lattice
            assert over.is_even and discriminant(over) == 1
            assert len(enumerate_roots(over).roots) == 240
        chain = verify.verify_e6_complement_chain()
        assert chain.order3_orbits == 1
        assert (chain.complement_rank, chain.complement_disc, chain.complement_roots) == (6, 3, 72)
        assert chain.complement_q == ["2/3"]


def test_08_candidate_identities(report):
    with report(8, "all intersection identities for the 26 candidate classes", None):
        model = verify.build_ten_sequence_model()
        rep = verify.candidate_curve_table(model)
        assert rep.ok
        assert len(rep.classes) == 5 + 20 + 1
        triple_pairs = [c.name.split(".") for c in rep.checks if c.name.count("R_(") == 2]
        assert sum(1 for a, b in triple_pairs if a != b) == 190
        by_name = {c.name: c for c in rep.checks}
        assert by_name["R^2"].value == -2
        assert all(by_name[f"R.E_{j}"].value == 1 for j in range(1, 7))


def test_09_figure_catalog(report):
    with report(9, "orthogonal vertex sets equal the bold sets on the figure catalog", None):
        cat = cg.figure_catalog()
        expected = {"e8_a1_a1": (), "e7_a1_a1": (), "dm_a1_a1_triple_star": (),
                    "d5_d5_a1": ("R1", "R2"), "dm_a1_a1_dihedral_star": ("R1", "R2", "R3")}
        for name, bold in expected.items():
            g = cat[name]
            orth = cg.orthogonal_vertex_set(g, cg.find_elliptic_configurations(g))
            assert orth.vertices == bold == g.bold, name


def test_10_d8_pair_saturation(report):
    with report(10, "D8+D8 span, index 2, quotient Z/2, A1^8 concentration, bold sum halvable", 60):
        rep = verify.d8_pair_saturation_pipeline()
        assert rep.span_types == ["D8", "D8"]
        assert rep.saturation_index == 2 and rep.quotient == [2]
        assert rep.concentration_types == ["A1"] * 8
        assert rep.bold_sum_halvable


def test_11_root_counts(report):
    with report(11, "root counts match closed forms for all ADE types of rank <= 12", None):
        types = ([ADEType("A", n) for n in range(1, 13)] + [ADEType("D", n) for n in range(4, 13)]
                 + [ADEType("E", n) for n in (6, 7, 8)])
        for backend in BACKENDS:
            for t in types:
                n = t.index
                closed = {"A": n * (n + 1), "D": 2 * n * (n - 1),
                          "E": {6: 72, 7: 126, 8: 240}.get(n)}[t.family]
                rs = enumerate_roots(make_ade(t), backend=backend)
                assert len(rs.roots) == closed, (backend, str(t))
                assert rs.components == (t,)


def test_12_component_bound(report):
    with report(12, "component bound: two fibres on 10 vertices true, one on 10 false, none true", None):
        a = [f"a{i}" for i in range(5)]
        b = [f"b{i}" for i in range(5)]
        two = cg.make_graph(a + b, [(a[i], a[(i + 1) % 5]) for i in range(5)]
                            + [(b[i], b[(i + 1) % 5]) for i in range(5)])
        fibres = cg.find_elliptic_configurations(two)
        assert len(fibres) == 2 and sum(len(f.support) for f in fibres) == 10
        assert cg.component_bound_check(two, fibres) is True
        one = cg.cycle_graph(10)
        fib = cg.find_elliptic_configurations(one)
        assert len(fib) == 1 and len(fib[0].support) == 10
        assert cg.component_bound_check(one, fib) is False
        assert cg.component_bound_check(one, []) is True
