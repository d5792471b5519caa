"""Small dense linear algebra over :class:`fractions.Fraction`.

Everything here is exact; zero tests carry no tolerance.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import NumericError

Matrix = Sequence[Sequence[Fraction]]


def _copy(m: Matrix) -> list[list[Fraction]]:
    return [[Fraction(v) for v in row] for row in m]


def det(m: Matrix) -> Fraction:
    """Determinant by Gaussian elimination with row pivoting."""
    a = _copy(m)
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("determinant of a non-square matrix")
    sign = 1
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            sign = -sign
        p = a[col][col]
        result *= p
        for r in range(col + 1, n):
            f = a[r][col] / p
            if f:
                for c in range(col, n):
                    a[r][c] -= f * a[col][c]
    return sign * result


def leading_minors(m: Matrix) -> list[Fraction]:
    """Leading principal minors, computed from one pivot-free elimination.

    Falls back to explicit determinants once a zero pivot shows up.
    """
    a = _copy(m)
    n = len(a)
    minors = []
    running = Fraction(1)
    for k in range(n):
        p = a[k][k]
        if p == 0:
            return minors + [det([row[: j + 1] for row in m[: j + 1]]) for j in range(k, n)]
        running *= p
        minors.append(running)
        for r in range(k + 1, n):
            f = a[r][k] / p
            if f:
                for c in range(k, n):
                    a[r][c] -= f * a[k][c]
    return minors


def is_positive_definite(m: Matrix) -> bool:
    """Sylvester's criterion on a symmetric matrix."""
    n = len(m)
    if any(m[i][j] != m[j][i] for i in range(n) for j in range(i)):
        return False
    return all(v > 0 for v in leading_minors(m))


def solve(m: Matrix, b: Sequence[Fraction]) -> list[Fraction]:
    """Solve ``m @ x = b``; raises :class:`NumericError` when ``m`` is singular."""
    n = len(m)
    a = [row + [Fraction(v)] for row, v in zip(_copy(m), b)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise NumericError("singular matrix")
        a[col], a[pivot] = a[pivot], a[col]
        p = a[col][col]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col] / p
                for c in range(col, n + 1):
                    a[r][c] -= f * a[col][c]
    return [a[i][n] / a[i][i] for i in range(n)]


def submatrix(m: Matrix, rows: Sequence[int], cols: Sequence[int]) -> list[list[Fraction]]:
    return [[m[r][c] for c in cols] for r in rows]
