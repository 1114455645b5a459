"""Contains exact fraction-free elimination"""
from fractions import Fraction
from math import lcm
from typing import List, Sequence, Union

Entry = Union[int, Fraction]


def _integer_rows(matrix: Sequence[Sequence[Entry]]) -> List[List[int]]:
    # scaling a row by a non-zero integer keeps the rank
    rows = []
    for row in matrix:
        values = [Fraction(value) for value in row]
        scale = lcm(*(value.denominator for value in values)) if len(values) > 0 else 1
        rows.append([int(value * scale) for value in values])
    return rows


def bareiss_rank(matrix: Sequence[Sequence[Entry]]) -> int:
    """
    Rank by Bareiss elimination; every intermediate entry is a minor of the
    input, so the divisions are exact and entries stay integers
    Args:
        matrix: rows of integers or Fractions, all of the same length

    Returns:
        exact rank
    """
    rows = _integer_rows(matrix)
    if len(rows) == 0:
        return 0
    width = len(rows[0])
    if any(len(row) != width for row in rows):
        raise ValueError("Matrix rows differ in length")

    rank = 0
    previous_pivot = 1
    for col in range(width):
        pivot_row = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot_row is None:
            continue
        rows[rank], rows[pivot_row] = rows[pivot_row], rows[rank]
        pivot = rows[rank][col]
        for r in range(rank + 1, len(rows)):
            factor = rows[r][col]
            target = rows[r]
            source = rows[rank]
            for c in range(col + 1, width):
                target[c] = (pivot * target[c] - factor * source[c]) // previous_pivot
            target[col] = 0
        previous_pivot = pivot
        rank += 1
        if rank == len(rows):
            break
    return rank
