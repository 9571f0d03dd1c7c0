"""Exact linear algebra over the rationals for small symmetric matrices.

Everything here is exact: entries are `fractions.Fraction` values backed by
arbitrary-precision integers, and no operation ever rounds.  The matrices
that arise in practice are Gram matrices of curve sets, so symmetry is
enforced structurally and sizes stay small (a few dozen rows at most).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .errors import SingularMatrixError

Rat = Fraction


def _as_rat(value: Rat | int) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


class SymMatrix:
    """Immutable symmetric matrix with exact rational entries."""

    __slots__ = ("_rows",)

    def __init__(self, rows: Iterable[Iterable[Rat | int]]):
        mat = tuple(tuple(_as_rat(x) for x in row) for row in rows)
        for row in mat:
            if len(row) != len(mat):
                raise ValueError("matrix must be square")
        for i in range(len(mat)):
            for j in range(i):
                if mat[i][j] != mat[j][i]:
                    raise ValueError(f"entries ({i},{j}) and ({j},{i}) differ")
        self._rows = mat

    @property
    def n(self) -> int:
        return len(self._rows)

    def entry(self, i: int, j: int) -> Fraction:
        return self._rows[i][j]

    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._rows

    def submatrix(self, indices: Sequence[int]) -> "SymMatrix":
        return SymMatrix(
            tuple(tuple(self._rows[i][j] for j in indices) for i in indices)
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SymMatrix):
            return NotImplemented
        return self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        body = ", ".join("[" + ", ".join(str(x) for x in row) + "]" for row in self._rows)
        return f"SymMatrix([{body}])"


def solve_symmetric(matrix: SymMatrix, rhs: Sequence[Rat | int]) -> tuple[Fraction, ...]:
    """Solve M·x = b exactly by Gaussian elimination over the rationals.

    The returned vector satisfies M·x − b = 0 identically.  Raises
    SingularMatrixError when M has determinant zero.
    """
    n = matrix.n
    if len(rhs) != n:
        raise ValueError(f"rhs has length {len(rhs)}, matrix has {n} rows")
    a = [list(row) for row in matrix.rows()]
    b = [_as_rat(v) for v in rhs]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            b[col], b[piv] = b[piv], b[col]
        for r in range(col + 1, n):
            if a[r][col] == 0:
                continue
            factor = a[r][col] / a[col][col]
            for c in range(col, n):
                a[r][c] -= factor * a[col][c]
            b[r] -= factor * b[col]
    x = [Fraction(0)] * n
    for r in range(n - 1, -1, -1):
        acc = b[r]
        for c in range(r + 1, n):
            acc -= a[r][c] * x[c]
        x[r] = acc / a[r][r]
    return tuple(x)


def is_negative_definite(matrix: SymMatrix) -> bool:
    """Sylvester test: the k-th leading principal minor must carry sign (−1)^k.

    Implemented as fraction-free elimination, whose pivots are exactly the
    leading minors; a pivot of the wrong sign (or zero) settles the answer
    immediately.  The empty matrix is vacuously negative definite.
    """
    n = matrix.n
    a = [list(row) for row in matrix.rows()]
    prev = Fraction(1)
    for k in range(n):
        pivot = a[k][k]
        if pivot == 0:
            return False
        if (pivot < 0) != (k % 2 == 0):
            return False
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (pivot * a[i][j] - a[i][k] * a[k][j]) / prev
        prev = pivot
    return True


def determinant(matrix: SymMatrix) -> Fraction:
    """Exact determinant by fraction-free elimination with row pivoting."""
    n = matrix.n
    if n == 0:
        return Fraction(1)
    a = [list(row) for row in matrix.rows()]
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if piv is None:
                return Fraction(0)
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]
