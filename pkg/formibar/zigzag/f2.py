"""Linear algebra over F2 with vectors stored as int bitsets (bit i = coordinate i)."""

from typing import Dict, List, Sequence, Tuple

import numpy as np

from formibar.core.errors import MalformedValueError


def bit_low(bits: int) -> int:
    """Highest set-bit index, or -1 for the zero vector."""
    return bits.bit_length() - 1


def bitset_to_indices(bits: int) -> List[int]:
    out: List[int] = []
    while bits:
        lsb = bits & -bits
        out.append(lsb.bit_length() - 1)
        bits ^= lsb
    return out


def cols_from_dense(matrix: np.ndarray) -> List[int]:
    a = np.asarray(matrix, dtype=np.uint8) & 1
    cols: List[int] = []
    for j in range(a.shape[1]):
        bits = 0
        for r in np.nonzero(a[:, j])[0]:
            bits ^= 1 << int(r)
        cols.append(bits)
    return cols


def reduce_columns(cols: Sequence[int]) -> Tuple[Dict[int, int], List[int], List[int]]:
    """Column reduction with the highest set bit as pivot.

    Returns (pivot row -> column index, reduced columns, combinations of original columns).
    """
    reduced = list(cols)
    combos = [1 << j for j in range(len(cols))]
    pivot_of_low: Dict[int, int] = {}
    for j in range(len(reduced)):
        col, comb = reduced[j], combos[j]
        low = bit_low(col)
        while low != -1 and low in pivot_of_low:
            p = pivot_of_low[low]
            col ^= reduced[p]
            comb ^= combos[p]
            low = bit_low(col)
        reduced[j], combos[j] = col, comb
        if low != -1:
            pivot_of_low[low] = j
    return pivot_of_low, reduced, combos


def rank(cols: Sequence[int]) -> int:
    pivots, _, _ = reduce_columns(cols)
    return len(pivots)


def kernel_basis(cols: Sequence[int]) -> List[int]:
    """Basis of the kernel, as bitsets over the columns."""
    _, reduced, combos = reduce_columns(cols)
    return [combos[j] for j, col in enumerate(reduced) if col == 0]


class Echelon:
    """Incremental echelon form that remembers how each row was built from the inputs."""

    def __init__(self):
        self.rows: Dict[int, Tuple[int, int]] = {}

    def reduce(self, vec: int) -> Tuple[int, int]:
        """(residual, combination of added vectors cancelled from vec)."""
        combo = 0
        low = bit_low(vec)
        while low != -1 and low in self.rows:
            row, row_combo = self.rows[low]
            vec ^= row
            combo ^= row_combo
            low = bit_low(vec)
        return vec, combo

    def add(self, vec: int, tag: int) -> bool:
        """Insert vec (tagged by bitset tag); False when it was already in the span."""
        residual, combo = self.reduce(vec)
        if residual == 0:
            return False
        self.rows[bit_low(residual)] = (residual, combo ^ tag)
        return True

    def coordinates(self, vec: int) -> int:
        """Tags combination that sums to vec; vec must lie in the span."""
        residual, combo = self.reduce(vec)
        if residual:
            raise MalformedValueError("vector is outside the span")
        return combo
