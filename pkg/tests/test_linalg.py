from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from latglue import linalg
from oracles import sym_det, sym_invariants

small = st.integers(-6, 6)


def square(n_min=1, n_max=5):
    return st.integers(n_min, n_max).flatmap(
        lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n))


def rect(max_rows=4, max_cols=5):
    return st.tuples(st.integers(1, max_rows), st.integers(1, max_cols)).flatmap(
        lambda rc: st.lists(st.lists(small, min_size=rc[1], max_size=rc[1]),
                            min_size=rc[0], max_size=rc[0]))


@given(square())
def test_det_matches_sympy(m):
    assert linalg.det(m) == sym_det(m)


@given(rect())
def test_smith_form_is_a_valid_decomposition(m):
    snf = linalg.smith_normal_form(m)
    left, right = snf.left, snf.right
    assert abs(linalg.det(left)) == 1
    assert abs(linalg.det(right)) == 1
    d = snf.diagonal_matrix(len(m), len(m[0]))
    assert linalg.matmul(linalg.matmul(left, m), right) == d
    nonzero = [x for x in snf.diag if x]
    for a, b in zip(nonzero, nonzero[1:]):
        assert b % a == 0
    assert tuple(x for x in snf.diag if x not in (0, 1)) == sym_invariants(m)


@given(rect())
def test_hnf_transform(m):
    h, u = linalg.hnf_with_transform(m)
    assert linalg.matmul(u, m) == h
    assert abs(linalg.det(u)) == 1
    assert len(linalg.hnf(m)) == linalg.rank(m) == sympy.Matrix(m).rank()


@given(rect())
def test_integer_kernel(m):
    ker = linalg.integer_kernel(m)
    n = len(m[0])
    assert len(ker) == n - sympy.Matrix(m).rank()
    for v in ker:
        assert linalg.matvec(m, v) == [0] * len(m)
    if ker:
        # the kernel basis is saturated
        assert linalg.saturate_rows(ker)[1] == []


@given(square())
def test_solve_and_inverse(m):
    rhs = list(range(1, len(m) + 1))
    sol = linalg.solve_rational(m, rhs)
    if sym_det(m) == 0:
        assert sol is None
        return
    assert linalg.matvec(m, sol) == rhs
    inv = linalg.rational_inverse(m)
    assert linalg.matmul(m, inv) == linalg.identity(len(m))


@pytest.mark.parametrize("rows, factors", [
    ([[2, 0], [0, 1]], [2]),
    ([[2, 2, 0]], [2]),
    ([[1, 0, 0], [0, 3, 3]], [3]),
    ([[1, 1, 1, 1]], []),
    ([[2, 0, 0], [0, 2, 0]], [2, 2]),
])
def test_saturate_rows(rows, factors):
    basis, got = linalg.saturate_rows(rows)
    assert got == factors
    assert len(basis) == len(rows)


def test_saturate_rejects_dependent_rows():
    with pytest.raises(ValueError):
        linalg.saturate_rows([[1, 2], [2, 4]])


@pytest.mark.parametrize("v, expected", [
    ([Fraction(1, 2), Fraction(1, 3)], [3, 2]),
    ([Fraction(-2), Fraction(4)], [-1, 2]),
    ([Fraction(0), Fraction(5, 7)], [0, 1]),
])
def test_primitive_integer_vector(v, expected):
    assert linalg.primitive_integer_vector(v) == expected


@settings(max_examples=50)
@given(st.integers(-1000, 1000), st.integers(-1000, 1000))
def test_xgcd(a, b):
    g, x, y = linalg.xgcd(a, b)
    assert g == sympy.gcd(a, b)
    assert a * x + b * y == g


def test_unimodular_inverse_rejects_non_unimodular():
    with pytest.raises(ValueError):
        linalg.unimodular_inverse([[2, 0], [0, 1]])
