from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nis2 import gf
from nis2.gf import FieldElem, Matrix


def naive_rref(A: np.ndarray, p: int):
    """Textbook Gauss-Jordan, one entry at a time."""
    A = [list(map(int, row)) for row in np.asarray(A) % p]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if A[i][c] % p), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][c], p - 2, p)
        A[r] = [x * inv % p for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return np.array(A, dtype=np.int64).reshape(rows, cols), pivots


def matrices(p: int, max_side: int = 9):
    return st.integers(1, max_side).flatmap(
        lambda r: st.integers(1, max_side).flatmap(
            lambda c: st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c).map(
                lambda xs: np.array(xs, dtype=np.int64).reshape(r, c)
            )
        )
    )


def test_field_element_arithmetic():
    a, b = FieldElem(3, 7), FieldElem(5, 7)
    assert int(a + b) == 1
    assert int(a * b) == 1
    assert int(a / b) == 3 * pow(5, 5, 7) % 7
    assert int(a**6) == 1
    assert int(-a) == 4
    with pytest.raises(ZeroDivisionError):
        FieldElem(0, 7).inverse()


def test_rejects_composite_and_large_characteristic():
    for p in (1, 4, 9, 257):
        with pytest.raises(ValueError):
            gf.check_prime(p)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_packed_and_dense_rref_agree_with_naive_reference(p, rng):
    for _ in range(30):
        A = rng.integers(0, p, (20, 20))
        if rng.random() < 0.5:
            A[:, rng.integers(0, 20, 5)] = 0
            A[rng.integers(0, 20)] = (A[0] + A[1]) % p
        R, piv = Matrix(A, p).rref()
        R0, piv0 = naive_rref(A, p)
        assert piv == piv0
        assert np.array_equal(R.to_array(), R0)


def test_packing_crosses_word_boundary(rng):
    A = rng.integers(0, 2, (70, 130))
    M = Matrix(A, 2)
    assert M.is_packed
    assert np.array_equal(M.to_array(), A)
    assert gf.rank(M) == len(naive_rref(A, 2)[1])


@settings(max_examples=60, deadline=None)
@given(matrices(2))
def test_rank_nullity_f2(A):
    M = Matrix(A, 2)
    null = gf.nullspace(M)
    assert gf.rank(M) + len(null) == A.shape[1]
    for v in null:
        assert not np.any(A @ v % 2)


@settings(max_examples=60, deadline=None)
@given(matrices(5))
def test_rank_nullity_f5(A):
    M = Matrix(A, 5)
    N = gf.nullspace_matrix(M)
    assert gf.rank(M) + N.shape[0] == A.shape[1]
    assert not np.any(A @ N.T % 5)


@settings(max_examples=40, deadline=None)
@given(matrices(3, 6), st.data())
def test_solve_finds_a_solution_when_one_exists(A, data):
    x = np.array(data.draw(st.lists(st.integers(0, 2), min_size=A.shape[1], max_size=A.shape[1])))
    b = A @ x % 3
    y = gf.solve(Matrix(A, 3), b)
    assert y is not None
    assert np.array_equal(A @ y % 3, b)


def test_solve_reports_inconsistency():
    A = np.array([[1, 1], [1, 1]])
    assert gf.solve(Matrix(A, 2), [0, 1]) is None


@pytest.mark.parametrize("p", [2, 7])
def test_det_and_inverse(p, rng):
    for _ in range(20):
        A = rng.integers(0, p, (6, 6))
        d = int(gf.det(Matrix(A, p)))
        full = gf.rank(Matrix(A, p)) == 6
        assert (d != 0) == full
        if full:
            inv = gf.inverse(Matrix(A, p)).to_array()
            assert np.array_equal(A @ inv % p, np.eye(6, dtype=np.int64))
            assert d == round(np.linalg.det(A)) % p


def test_singular_inverse_raises():
    with pytest.raises(ZeroDivisionError):
        gf.inverse(Matrix(np.ones((3, 3), dtype=np.int64), 2))


def test_span_membership_and_coordinates():
    B = gf.row_basis([np.array([1, 1, 0]), np.array([0, 1, 1]), np.array([1, 0, 1])], 3, 2)
    assert B.shape[0] == 2
    assert gf.in_span(B, np.array([1, 0, 1]), 2)
    assert not gf.in_span(B, np.array([1, 0, 0]), 2)
    c = gf.coordinates(B, np.array([1, 0, 1]), 2)
    assert np.array_equal(c @ B % 2, [1, 0, 1])


def test_all_vectors_counts():
    assert sum(1 for _ in gf.all_vectors(3, 3)) == 27


def _count_irreducible(degree: int, p: int) -> int:
    count = 0
    for v in gf.all_vectors(degree, p):
        if gf.is_irreducible(list(v) + [1], p):
            count += 1
    return count


def test_irreducibility_counts_match_necklace_formula():
    # monic irreducibles of degree d over F_q: (1/d) sum_{e|d} mu(e) q^(d/e)
    assert [_count_irreducible(d, 2) for d in (1, 2, 3, 4, 5)] == [2, 1, 2, 3, 6]
    assert [_count_irreducible(d, 3) for d in (1, 2, 3)] == [3, 3, 8]
    assert gf.is_irreducible([1, 1, 1], 2)
    assert not gf.is_irreducible([1, 0, 1], 2)


def test_polynomial_division():
    f = gf.poly_mul([1, 1], [1, 0, 1], 2)
    q, r = gf.poly_divmod(f, [1, 0, 1], 2)
    assert gf.poly_trim(q, 2) == [1, 1]
    assert gf.poly_trim(r, 2) == []
