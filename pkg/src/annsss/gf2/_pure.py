"""Pure-Python GF(2) kernel: vectors are Python ints used as bitsets.

Bit ``i`` of a row is column ``i``.  Arbitrary-precision ints give
word-level XOR for free; the compiled kernel in ``_speed.pyx`` does the
same work on packed uint64 buffers without interpreter overhead.
"""

from __future__ import annotations

from typing import Iterable, List

BACKEND_NAME = "python"


def rank_of_rows(rows: Iterable[int]) -> int:
    """GF(2) rank of the given rows (trailing bits beyond ncols must be 0)."""
    pivots: dict[int, int] = {}
    rank = 0
    for row in rows:
        row = _reduce(row, pivots)
        if row:
            pivots[row.bit_length() - 1] = row
            rank += 1
    return rank


def mul_rows(a_rows: List[int], b_rows: List[int]) -> List[int]:
    """Rows of the product A*B, where row i of A selects rows of B to XOR."""
    out = []
    for m in a_rows:
        acc = 0
        while m:
            low = m & -m
            acc ^= b_rows[low.bit_length() - 1]
            m ^= low
        out.append(acc)
    return out


def _reduce(vec: int, pivots: dict[int, int]) -> int:
    while vec:
        top = vec.bit_length() - 1
        row = pivots.get(top)
        if row is None:
            return vec
        vec ^= row
    return 0


class SpanSolver:
    """Incremental GF(2) span membership with a retained pivot cache.

    Columns are fed in one at a time; each is reduced against the pivots
    accumulated so far and retained if independent.  A sweep over a
    filtration re-uses all elimination work done for earlier levels.
    """

    def __init__(self) -> None:
        self._pivots: dict[int, int] = {}

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def add(self, vec: int) -> bool:
        """Insert a vector; returns True if it enlarged the span."""
        vec = _reduce(vec, self._pivots)
        if vec == 0:
            return False
        self._pivots[vec.bit_length() - 1] = vec
        return True

    def reduce(self, vec: int) -> int:
        """Residual of vec modulo the current span."""
        return _reduce(vec, self._pivots)

    def contains(self, vec: int) -> bool:
        return _reduce(vec, self._pivots) == 0

    def clone(self) -> "SpanSolver":
        other = SpanSolver.__new__(SpanSolver)
        other._pivots = dict(self._pivots)
        return other
