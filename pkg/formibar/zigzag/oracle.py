from __future__ import annotations

import logging
from functools import lru_cache
from typing import List, Optional

import numpy as np

from formibar.core.errors import SizeBoundExceededError
from formibar.utils.utils import get_settings
from formibar.zigzag.diagram import ZigzagSetDiagram, ZZInterval
from formibar.zigzag.f2 import cols_from_dense, kernel_basis, rank

logger = logging.getLogger(__name__)


def _limit_to_colimit_rank(diagram: ZigzagSetDiagram, a: int, b: int) -> int:
    """Rank over F2 of the canonical map lim -> colim of the sub-zigzag on levels a..b."""
    dims = diagram.dims()
    offsets = {}
    total = 0
    for j in range(a, b + 1):
        offsets[j] = total
        total += dims[j]
    if total == 0:
        return 0

    constraints = []  # one row per coordinate of each arrow target: F(x_source) + x_target = 0
    relations = []  # one column per source element: e_source + e_F(source)
    for k in range(a, b):
        source, target = ZigzagSetDiagram.arrow_ends(k)
        arrow = diagram.maps[k]
        block = np.zeros((dims[target], total), dtype=np.uint8)
        for r in range(dims[target]):
            block[r, offsets[target] + r] = 1
        for w, image in enumerate(arrow):
            block[image, offsets[source] + w] ^= 1
            relation = np.zeros(total, dtype=np.uint8)
            relation[offsets[source] + w] ^= 1
            relation[offsets[target] + image] ^= 1
            relations.append(relation)
        constraints.append(block)

    if constraints:
        system = np.vstack(constraints)
        limit = kernel_basis(cols_from_dense(system))
    else:
        limit = [1 << i for i in range(total)]

    # a limit vector lands in the colimit through its level-a coordinates
    mask_a = ((1 << dims[a]) - 1) << offsets[a]
    left = [vec & mask_a for vec in limit]
    right = cols_from_dense(np.array(relations, dtype=np.uint8).T) if relations else []
    return rank(left + right) - rank(right)


def rank_oracle_barcode(diagram: ZigzagSetDiagram, max_levels: Optional[int] = None) -> List[ZZInterval]:
    """Interval multiplicities by inclusion-exclusion over the rank invariant.

    Independent of the sweep in reduction.py; used to cross-check it on small diagrams.
    """
    max_levels = max_levels if max_levels is not None else get_settings().oracle_levels
    n = diagram.length
    if n > max_levels:
        logger.warning("rank oracle refused a diagram with %d levels (limit %d)", n, max_levels)
        raise SizeBoundExceededError(
            f"rank oracle is limited to {max_levels} levels, got {n}", sizes=(n,)
        )

    @lru_cache(maxsize=None)
    def r(a: int, b: int) -> int:
        if a < 0 or b >= n or a > b:
            return 0
        return _limit_to_colimit_rank(diagram, a, b)

    bars: List[ZZInterval] = []
    for a in range(n):
        for b in range(a, n):
            m = r(a, b) - r(a - 1, b) - r(a, b + 1) + r(a - 1, b + 1)
            if m < 0:
                raise ArithmeticError(f"negative multiplicity {m} at [{a},{b}]")
            bars.extend(ZZInterval(a, b) for _ in range(m))
    return bars
