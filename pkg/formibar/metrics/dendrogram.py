from __future__ import annotations

import logging
from fractions import Fraction
from typing import Dict, FrozenSet

from formibar.core.errors import NotADendrogramError
from formibar.core.metric_space import MetricSpace
from formibar.core.partitions import SubPartition, UnionFind, refines
from formibar.core.timeline import Formigram, from_sampler

logger = logging.getLogger(__name__)


def check_dendrogram(theta: Formigram) -> None:
    """Raise NotADendrogramError unless theta is empty before 0, full from 0 on, only merges,
    is right-continuous and ends in a single block."""
    universe = theta.universe
    if theta.left_tail.blocks:
        raise NotADendrogramError("a dendrogram is empty before its birth time")
    if not universe:
        return
    if not theta.crit or theta.crit[0] != 0:
        raise NotADendrogramError("a dendrogram starts at t = 0")
    levels = theta.levels()[1:]
    for value in levels:
        if not value.is_full:
            raise NotADendrogramError(f"{value!r} does not cover the whole set")
    for earlier, later in zip(levels, levels[1:]):
        if not refines(earlier, later):
            raise NotADendrogramError(f"{earlier!r} is not refined by the later {later!r}")
    for i, c in enumerate(theta.crit):
        after = theta.on_gap[i] if i < len(theta.on_gap) else theta.right_tail
        if theta.at_crit[i] != after:
            raise NotADendrogramError(f"not right-continuous at t={c}")
    if len(theta.right_tail.blocks) != 1:
        raise NotADendrogramError("a dendrogram ends in a single block")


def dendrogram_ultrametric(theta: Formigram) -> MetricSpace:
    """u(x, x') = first time x and x' share a block."""
    check_dendrogram(theta)
    points = sorted(theta.universe)
    u: Dict[FrozenSet[str], Fraction] = {}
    for c in theta.crit:
        for block in theta.value_at(c).blocks:
            members = sorted(block)
            for i, x in enumerate(members):
                for y in members[i + 1:]:
                    u.setdefault(frozenset((x, y)), c)
    space = MetricSpace(tuple(points), u)
    logger.debug("ultrametric of a %d-leaf dendrogram, diameter %s", len(points), space.diameter())
    return space


def dendrogram_from_ultrametric(space: MetricSpace) -> Formigram:
    """Single-linkage dendrogram: empty before 0, then components of {u <= t}."""
    space.require_ultrametric(positive=False)
    events = {Fraction(0)} | {space.d(x, y) for x, y in space.pairs()}

    def sampler(t: Fraction) -> SubPartition:
        if t < 0:
            return SubPartition.empty(space.points)
        uf = UnionFind(space.points)
        for x, y in space.pairs():
            if space.d(x, y) <= t:
                uf.union(x, y)
        return SubPartition.of(space.points, uf.to_sets())

    return from_sampler(frozenset(space.points), events, sampler)
