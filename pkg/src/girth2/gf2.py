"""GF(2) linear algebra on integer bitsets.

Rows are plain Python ints: bit ``i`` is column ``i``.  Arbitrary-precision
ints already behave as word-blocked bit vectors, so XOR and popcount are the
only primitives needed.  Pivots are always the lowest set bit, which makes
reduced forms reproducible.
"""

from __future__ import annotations

from bisect import insort
from typing import Iterable, Optional


class Gf2Elimination:
    """Incremental row reduction with combination tracking.

    Every inserted row is reduced against the current basis; rows that reduce
    to zero contribute a kernel combination.  The basis is kept fully reduced
    (each pivot appears in exactly one stored row), so kernel vectors returned
    by :meth:`solve` and :attr:`kernel` are expressed over the original rows.
    """

    def __init__(self, rows: Iterable[int] = ()):
        self._pivots: list[int] = []  # ascending
        self._rows: list[int] = []  # reduced values, aligned with _pivots
        self._combos: list[int] = []  # combinations over original row indices
        self.kernel: list[int] = []  # combos of original rows that XOR to zero
        self._count = 0
        for row in rows:
            self.add_row(row)

    @property
    def rank(self) -> int:
        return len(self._rows)

    @property
    def num_rows(self) -> int:
        return self._count

    def _reduce(self, value: int, combo: int) -> tuple[int, int]:
        for k, p in enumerate(self._pivots):
            if (value >> p) & 1:
                value ^= self._rows[k]
                combo ^= self._combos[k]
        return value, combo

    def add_row(self, value: int) -> None:
        index = self._count
        self._count += 1
        value, combo = self._reduce(value, 1 << index)
        if value == 0:
            self.kernel.append(combo)
            return
        pivot = (value & -value).bit_length() - 1
        # back-substitute so the stored basis stays fully reduced
        for k in range(len(self._rows)):
            if (self._rows[k] >> pivot) & 1:
                self._rows[k] ^= value
                self._combos[k] ^= combo
        insort_index = 0
        while insort_index < len(self._pivots) and self._pivots[insort_index] < pivot:
            insort_index += 1
        self._pivots.insert(insort_index, pivot)
        self._rows.insert(insort_index, value)
        self._combos.insert(insort_index, combo)

    def solve(self, target: int) -> Optional[int]:
        """Combination of original rows XORing to ``target``, or None."""
        value, combo = self._reduce(target, 0)
        return combo if value == 0 else None

    def reduced_rows(self) -> list[int]:
        return list(self._rows)

    def pivots(self) -> list[int]:
        return list(self._pivots)


def gf2_rank(rows: Iterable[int]) -> int:
    """Rank over GF(2) via elimination on lowest-set-bit pivots."""
    basis: list[tuple[int, int]] = []  # (pivot, value), ascending pivots
    rank = 0
    for value in rows:
        for pivot, bv in basis:
            if (value >> pivot) & 1:
                value ^= bv
        if value:
            insort(basis, ((value & -value).bit_length() - 1, value))
            rank += 1
    return rank


def gf2_has_dependency(rows: Iterable[int]) -> bool:
    """True as soon as some row reduces to zero against the earlier ones."""
    basis: list[tuple[int, int]] = []
    for value in rows:
        for pivot, bv in basis:
            if (value >> pivot) & 1:
                value ^= bv
        if value == 0:
            return True
        insort(basis, ((value & -value).bit_length() - 1, value))
    return False


def kernel_basis(rows: Iterable[int]) -> list[int]:
    """Basis of combinations of the given rows that XOR to zero."""
    return list(Gf2Elimination(rows).kernel)
