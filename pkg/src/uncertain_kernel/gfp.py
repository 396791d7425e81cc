"""Gaussian elimination over a prime field GF(p) on plain integer lists.

Entries are Python ints kept in ``[0, p)``; rows are lists.
"""

from __future__ import annotations

from collections.abc import Sequence

DEFAULT_PRIME = 1_000_003


def reduce_matrix(rows: Sequence[Sequence[int]], p: int) -> list[list[int]]:
    return [[x % p for x in row] for row in rows]


def rank(rows: Sequence[Sequence[int]], p: int) -> int:
    """Rank of a matrix over GF(p)."""
    mat = reduce_matrix(rows, p)
    if not mat:
        return 0
    ncols = len(mat[0])
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if pivot is None:
            continue
        mat[r], mat[pivot] = mat[pivot], mat[r]
        inv = pow(mat[r][c], p - 2, p)
        prow = [(x * inv) % p for x in mat[r]]
        mat[r] = prow
        for i in range(r + 1, len(mat)):
            f = mat[i][c]
            if f:
                mat[i] = [(a - f * b) % p for a, b in zip(mat[i], prow)]
        r += 1
        if r == len(mat):
            break
    return r


def columns_rank(rows: Sequence[Sequence[int]], cols: Sequence[int], p: int) -> int:
    """Rank of the submatrix made of the given column indices."""
    if not cols:
        return 0
    return rank([[row[c] for c in cols] for row in rows], p)


def pivot_out(
    rows: Sequence[Sequence[int]], cols: Sequence[int], p: int
) -> list[list[int]]:
    """Pivot on each column in ``cols`` and drop the pivot rows.

    The columns must be linearly independent. The returned matrix still has
    all original columns; the pivoted ones become zero and callers delete
    them. Linear independence of a column set ``J`` in the result equals
    independence of ``J`` together with ``cols`` in the input.
    """
    mat = reduce_matrix(rows, p)
    used: list[int] = []
    for c in cols:
        pivot = next((i for i in range(len(mat)) if i not in used and mat[i][c]), None)
        if pivot is None:
            raise ValueError(f"column {c} is dependent on the columns pivoted so far")
        inv = pow(mat[pivot][c], p - 2, p)
        prow = [(x * inv) % p for x in mat[pivot]]
        mat[pivot] = prow
        for i in range(len(mat)):
            f = mat[i][c]
            if i != pivot and f:
                mat[i] = [(a - f * b) % p for a, b in zip(mat[i], prow)]
        used.append(pivot)
    return [row for i, row in enumerate(mat) if i not in used]
