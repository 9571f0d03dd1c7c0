"""Exact linear algebra: pinned cases, oracle agreement, algebraic round trips."""

from fractions import Fraction
import itertools

import pytest
from hypothesis import given, strategies as st

import oracles
from logsurf import (
    SingularMatrixError,
    SymMatrix,
    determinant,
    is_negative_definite,
    solve_symmetric,
)


@st.composite
def symmetric_rows(draw, min_n=1, max_n=5, low=-5, high=5):
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            value = draw(st.integers(min_value=low, max_value=high))
            rows[i][j] = value
            rows[j][i] = value
    return rows


class TestSolve:
    def test_two_by_two(self):
        m = SymMatrix([[-2, 1], [1, -1]])
        assert solve_symmetric(m, (2, -1)) == (Fraction(-1), Fraction(0))

    def test_one_by_one(self):
        assert solve_symmetric(SymMatrix([[-1]]), (1,)) == (Fraction(-1),)

    def test_zero_rhs(self):
        m = SymMatrix([[-2, 1], [1, -2]])
        assert solve_symmetric(m, (0, 0)) == (Fraction(0), Fraction(0))

    def test_singular_raises(self):
        with pytest.raises(SingularMatrixError):
            solve_symmetric(SymMatrix([[1, 1], [1, 1]]), (1, 0))
        with pytest.raises(SingularMatrixError):
            solve_symmetric(SymMatrix([[0]]), (1,))

    def test_rhs_length_mismatch(self):
        with pytest.raises(ValueError):
            solve_symmetric(SymMatrix([[-1]]), (1, 2))

    def test_fractional_entries(self):
        m = SymMatrix([[Fraction(-1, 2)]])
        assert solve_symmetric(m, (Fraction(1, 4),)) == (Fraction(-1, 2),)

    @given(symmetric_rows(max_n=4), st.data())
    def test_substitution_and_oracle_agreement(self, rows, data):
        m = SymMatrix(rows)
        n = m.n
        if oracles.laplace_det(rows) == 0:
            with pytest.raises(SingularMatrixError):
                solve_symmetric(m, [0] * n)
            return
        rhs = data.draw(
            st.lists(st.integers(-9, 9), min_size=n, max_size=n), label="rhs"
        )
        x = solve_symmetric(m, rhs)
        for i in range(n):
            assert sum(rows[i][j] * x[j] for j in range(n)) == rhs[i]
        assert x == oracles.solve_linear(rows, rhs)


class TestNegativeDefinite:
    @pytest.mark.parametrize(
        "rows, expected",
        [
            ([[-2, 1], [1, -2]], True),
            ([[-1, 1], [1, -1]], False),
            ([[2]], False),
            ([[-1]], True),
            ([[0]], False),
        ],
    )
    def test_pinned(self, rows, expected):
        assert is_negative_definite(SymMatrix(rows)) is expected

    def test_empty_is_vacuously_definite(self):
        assert is_negative_definite(SymMatrix([])) is True

    @given(symmetric_rows(max_n=5))
    def test_agrees_with_principal_submatrix_bruteforce(self, rows):
        assert is_negative_definite(SymMatrix(rows)) == oracles.brute_negative_definite(
            rows
        )

    @given(symmetric_rows(max_n=4))
    def test_definite_means_negative_form_on_lattice(self, rows):
        if not is_negative_definite(SymMatrix(rows)):
            return
        n = len(rows)
        for vec in itertools.product((-2, -1, 0, 1, 2), repeat=n):
            if any(vec):
                assert oracles.quadratic_form(rows, vec) < 0

    @given(symmetric_rows(max_n=5), st.data())
    def test_invariant_under_simultaneous_permutation(self, rows, data):
        n = len(rows)
        perm = data.draw(st.permutations(range(n)), label="perm")
        permuted = [[rows[perm[i]][perm[j]] for j in range(n)] for i in range(n)]
        assert is_negative_definite(SymMatrix(rows)) == is_negative_definite(
            SymMatrix(permuted)
        )


class TestDeterminant:
    def test_empty(self):
        assert determinant(SymMatrix([])) == 1

    def test_pinned(self):
        assert determinant(SymMatrix([[-2, 1], [1, -2]])) == 3
        assert determinant(SymMatrix([[-2, 1], [1, -1]])) == 1
        assert determinant(SymMatrix([[0, 1], [1, 0]])) == -1

    @given(symmetric_rows(max_n=5))
    def test_agrees_with_laplace_expansion(self, rows):
        assert determinant(SymMatrix(rows)) == oracles.laplace_det(rows)


class TestSymMatrix:
    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            SymMatrix([[1, 2]])

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError):
            SymMatrix([[1, 2], [3, 4]])

    def test_rejects_floats(self):
        with pytest.raises(TypeError):
            SymMatrix([[1.5]])

    def test_submatrix_is_principal_block(self):
        m = SymMatrix([[-2, 1, 0], [1, -2, 1], [0, 1, -2]])
        sub = m.submatrix([0, 2])
        assert sub.rows() == ((Fraction(-2), Fraction(0)), (Fraction(0), Fraction(-2)))

    def test_equality_and_hash(self):
        a = SymMatrix([[1, 0], [0, 1]])
        b = SymMatrix([[Fraction(1), 0], [0, 1]])
        assert a == b
        assert hash(a) == hash(b)
