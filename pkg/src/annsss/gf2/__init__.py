"""Bit-packed GF(2) linear algebra: rank, span membership, filtered solves.

Two interchangeable kernels sit behind this module:

* ``_speed`` -- a Cython extension working on packed 64-bit words,
* ``_pure``  -- a fallback using Python ints as bitsets.

The compiled kernel is preferred when importable; set
``ANNSSS_GF2_BACKEND=python`` (or ``compiled``) to force a choice.
``benchmarks/bench_gf2.py`` compares the two.
"""

from __future__ import annotations

import os
from typing import Iterable, List, Sequence

from . import _pure

_choice = os.environ.get("ANNSSS_GF2_BACKEND", "auto").lower()
if _choice in ("auto", "compiled", "cython"):
    try:
        from . import _speed as _kernel  # type: ignore[attr-defined]
    except ImportError:
        if _choice != "auto":
            raise
        _kernel = _pure
elif _choice in ("python", "pure"):
    _kernel = _pure
else:  # pragma: no cover
    raise ValueError(f"unknown ANNSSS_GF2_BACKEND {_choice!r}")

BACKEND = _kernel.BACKEND_NAME
SpanSolver = _kernel.SpanSolver


class BitMatrix:
    """Immutable GF(2) matrix; row i is a Python int with bit j = entry (i, j).

    Trailing pad bits (j >= ncols) are required to be zero.
    """

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Sequence[int], ncols: int):
        rows = tuple(rows)
        mask = (1 << ncols) - 1
        for r in rows:
            if r < 0 or r & ~mask:
                raise ValueError("row has bits outside the column range")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "nrows", len(rows))
        object.__setattr__(self, "ncols", ncols)

    def __setattr__(self, *a):  # dimensions and payload are immutable
        raise AttributeError("BitMatrix is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, BitMatrix)
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.rows, self.ncols))

    def __repr__(self):
        return f"BitMatrix({self.nrows}x{self.ncols}, rank {self.rank()})"

    @classmethod
    def zero(cls, nrows: int, ncols: int) -> "BitMatrix":
        return cls([0] * nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls([1 << i for i in range(n)], n)

    @classmethod
    def from_columns(cls, cols: Iterable[int], nrows: int) -> "BitMatrix":
        """Build the matrix whose columns are the given row-count-bit vectors."""
        return cls(list(cols), nrows).transpose()

    def column(self, j: int) -> int:
        if not 0 <= j < self.ncols:
            raise IndexError(j)
        out = 0
        bit = 1 << j
        for i, row in enumerate(self.rows):
            if row & bit:
                out |= 1 << i
        return out

    def columns(self) -> List[int]:
        return list(self.transpose().rows)

    def transpose(self) -> "BitMatrix":
        cols = [0] * self.ncols
        for i, row in enumerate(self.rows):
            bit = 1 << i
            while row:
                low = row & -row
                cols[low.bit_length() - 1] |= bit
                row ^= low
        return BitMatrix(cols, self.nrows)

    def rank(self) -> int:
        return _kernel.rank_of_rows(self.rows)

    def mul(self, other: "BitMatrix") -> "BitMatrix":
        if self.ncols != other.nrows:
            raise ValueError(
                f"dimension mismatch: {self.nrows}x{self.ncols} * "
                f"{other.nrows}x{other.ncols}"
            )
        return BitMatrix(_kernel.mul_rows(self.rows, other.rows), other.ncols)

    def is_zero(self) -> bool:
        return not any(self.rows)


def rank(m: BitMatrix) -> int:
    return m.rank()


def mul(a: BitMatrix, b: BitMatrix) -> BitMatrix:
    return a.mul(b)


def in_span(vec: int, m: BitMatrix) -> bool:
    """True iff vec (an nrows-bit vector) lies in the column span of m."""
    if vec < 0 or vec >> m.nrows:
        raise ValueError("vector length does not match the ambient row count")
    cols = m.columns()
    return _kernel.rank_of_rows(cols) == _kernel.rank_of_rows(cols + [vec])
