"""Small exact linear algebra over ``Fraction``.

The matrices handled by this package are at most a dozen rows wide, so a
plain Gauss-Jordan elimination is all that is needed.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


def as_matrix(rows: Sequence[Sequence[object]]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def identity(size: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(size)] for i in range(size)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [
        [sum((row[t] * b[t][j] for t in range(inner)), Fraction(0)) for j in range(cols)]
        for row in a
    ]


def _row_reduce(rows: Matrix) -> tuple[Matrix, list[int]]:
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    width = len(m[0]) if m else 0
    for c in range(width):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        lead = m[r][c]
        m[r] = [x / lead for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                factor = m[i][c]
                m[i] = [x - factor * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows: Matrix) -> int:
    if not rows or not rows[0]:
        return 0
    return len(_row_reduce(rows)[1])


def inverse(rows: Matrix) -> Matrix:
    """Inverse of a square matrix; raises ``ValueError`` if it is singular."""
    size = len(rows)
    augmented = [list(row) + ident for row, ident in zip(rows, identity(size))]
    reduced, pivots = _row_reduce(augmented)
    if pivots[:size] != list(range(size)):
        raise ValueError("matrix is singular")
    return [row[size:] for row in reduced]
