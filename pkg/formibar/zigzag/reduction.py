from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from typing import List, Tuple

from formibar.zigzag.diagram import ZigzagSetDiagram, ZZInterval
from formibar.zigzag.f2 import Echelon, bitset_to_indices, reduce_columns

logger = logging.getLogger(__name__)


@dataclass
class _Generator:
    vec: int  # bitset over the standard basis of the current level
    birth: int
    forward_born: bool

    def priority(self) -> Tuple[int, int]:
        # position in the right filtration of the current level
        return (1, self.birth) if self.forward_born else (0, -self.birth)


def _push(vec: int, arrow: Tuple[int, ...]) -> int:
    out = 0
    for j in bitset_to_indices(vec):
        out ^= 1 << arrow[j]
    return out


def _forward(basis: List[_Generator], arrow: Tuple[int, ...], target_dim: int, k: int, bars: List[ZZInterval]) -> List[_Generator]:
    echelon = Echelon()
    survivors: List[_Generator] = []
    for gen in sorted(basis, key=_Generator.priority):
        image = _push(gen.vec, arrow)
        if echelon.add(image, 0):
            survivors.append(_Generator(image, gen.birth, gen.forward_born))
        else:
            # the kernel combination has gen as its highest term, so gen's bar ends here
            bars.append(ZZInterval(gen.birth, k))
    for j in range(target_dim):
        if echelon.add(1 << j, 0):
            survivors.append(_Generator(1 << j, k + 1, True))
    return survivors


def _backward(basis: List[_Generator], arrow: Tuple[int, ...], k: int, bars: List[ZZInterval]) -> List[_Generator]:
    ordered = sorted(basis, key=_Generator.priority)
    echelon = Echelon()
    for i, gen in enumerate(ordered):
        echelon.add(gen.vec, 1 << i)
    # column w = the image of e_w written in the ordered basis; row i has priority rank i
    cols = [echelon.coordinates(1 << target) for target in arrow]
    pivot_of_low, reduced, combos = reduce_columns(cols)
    survivors: List[_Generator] = []
    for i, gen in enumerate(ordered):
        if i in pivot_of_low:
            j = pivot_of_low[i]
            survivors.append(_Generator(combos[j], gen.birth, gen.forward_born))
        else:
            bars.append(ZZInterval(gen.birth, k))
    for j, col in enumerate(reduced):
        if col == 0:
            survivors.append(_Generator(combos[j], k + 1, False))
    return survivors


def zigzag_barcode_indices(diagram: ZigzagSetDiagram) -> List[ZZInterval]:
    """Interval decomposition of the F2-linearized diagram, as level-index ranges.

    Sweeps left to right keeping a basis of the current level that is compatible with its
    right filtration; each arrow either kills the highest-priority term of a kernel vector
    (forward) or keeps exactly the pivot rows of the image (backward).
    """
    bars: List[ZZInterval] = []
    basis = [_Generator(1 << j, 0, False) for j in range(len(diagram.levels[0]))]
    for k, arrow in enumerate(diagram.maps):
        if k % 2 == 0:
            basis = _forward(basis, arrow, len(diagram.levels[k + 1]), k, bars)
        else:
            basis = _backward(basis, arrow, k, bars)
    last = diagram.length - 1
    bars.extend(ZZInterval(gen.birth, last) for gen in basis)
    bars.sort(key=lambda z: (z.lo, z.hi))
    logger.debug("zigzag of %d levels (total size %d) -> %d bar(s)", diagram.length, sum(diagram.dims()), len(bars))
    return bars


def as_multiset(bars: List[ZZInterval]) -> Counter:
    return Counter((b.lo, b.hi) for b in bars)
