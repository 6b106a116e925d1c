"""Exact GF(2) linear algebra on bit-packed rows.

Rows are Python integers used as bit vectors, so there is no numerical
tolerance anywhere: membership and solve queries are exact.
"""

from __future__ import annotations

from typing import Optional, Sequence


class Gf2Solver:
    """Row-space membership and solve queries for a fixed set of GF(2) rows.

    Rows are reduced to echelon form once at construction; each pivot row
    carries the combination of input rows that produced it, so ``solve``
    can report which input rows sum to a target vector.
    """

    def __init__(self, rows: Sequence[int]):
        self.n_rows = len(rows)
        # list of (pivot_bit, reduced_row, combo_mask)
        self._pivots: list[tuple[int, int, int]] = []
        for idx, row in enumerate(rows):
            value, combo = self._reduce(row, 1 << idx)
            if value:
                self._pivots.append((value.bit_length() - 1, value, combo))
                self._pivots.sort(key=lambda t: -t[0])

    def _reduce(self, value: int, combo: int) -> tuple[int, int]:
        for pivot_bit, pivot_row, pivot_combo in self._pivots:
            if (value >> pivot_bit) & 1:
                value ^= pivot_row
                combo ^= pivot_combo
        return value, combo

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def contains(self, target: int) -> bool:
        """True iff ``target`` lies in the row space."""
        value, _ = self._reduce(target, 0)
        return value == 0

    def solve(self, target: int) -> Optional[int]:
        """Bitmask over input rows whose XOR equals ``target``, or None.

        Bit ``i`` of the result is set iff input row ``i`` participates.
        """
        value, combo = self._reduce(target, 0)
        if value != 0:
            return None
        return combo


def solve_mod2(rows: Sequence[int], target: int) -> Optional[int]:
    """One-shot version of :meth:`Gf2Solver.solve`."""
    return Gf2Solver(rows).solve(target)


def in_span(rows: Sequence[int], target: int) -> bool:
    """One-shot version of :meth:`Gf2Solver.contains`."""
    return Gf2Solver(rows).contains(target)
