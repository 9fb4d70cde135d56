from __future__ import annotations

import logging
from fractions import Fraction
from typing import Callable, List, Sequence

import networkx as nx
from networkx.algorithms import bipartite

from formibar.core.intervals import Barcode, Interval
from formibar.utils.utils import INF, ExtendedTime, is_finite

logger = logging.getLogger(__name__)


def _compatible(a: Interval, b: Interval, delta: Fraction) -> bool:
    # an infinite endpoint stays infinite under +-delta, so it only fits the same infinity
    return b.shifted(-delta, delta).contains_interval(a) and a.shifted(-delta, delta).contains_interval(b)


def is_delta_matchable(a_bars: Sequence[Interval], b_bars: Sequence[Interval], delta: Fraction) -> bool:
    """Whether a delta-matching exists, as a perfect matching with diagonal copies."""
    graph = nx.Graph()
    top = [("a", i) for i in range(len(a_bars))] + [("b*", j) for j in range(len(b_bars))]
    bottom = [("b", j) for j in range(len(b_bars))] + [("a*", i) for i in range(len(a_bars))]
    graph.add_nodes_from(top, bipartite=0)
    graph.add_nodes_from(bottom, bipartite=1)
    for i, a in enumerate(a_bars):
        for j, b in enumerate(b_bars):
            if _compatible(a, b, delta):
                graph.add_edge(("a", i), ("b", j))
            graph.add_edge(("b*", j), ("a*", i))
        if not a.contains_segment(2 * delta):
            graph.add_edge(("a", i), ("a*", i))
    for j, b in enumerate(b_bars):
        if not b.contains_segment(2 * delta):
            graph.add_edge(("b*", j), ("b", j))
    matching = bipartite.hopcroft_karp_matching(graph, top_nodes=top)
    return len(matching) // 2 == len(top)


def bottleneck_candidates(a_bars: Sequence[Interval], b_bars: Sequence[Interval]) -> List[Fraction]:
    values = {Fraction(0)}
    for a in a_bars:
        for b in b_bars:
            for u, v in ((a.left, b.left), (a.right, b.right)):
                if is_finite(u) and is_finite(v):
                    values.add(abs(u - v))
    for bar in list(a_bars) + list(b_bars):
        if bar.length != INF:
            values.add(bar.length / 2)
    return sorted(values)


def search_threshold(candidates: Sequence[Fraction], feasible: Callable[[Fraction], bool]) -> ExtendedTime:
    """Infimum of the feasible values for a monotone predicate that only changes at candidates.

    Midpoints are probed too, since a flag-sensitive condition can hold on (c_i, c_{i+1})
    without holding at c_i; the infimum is c_i in that case as well.
    """
    candidates = sorted(set(candidates))
    probes: List[Fraction] = []
    owners: List[Fraction] = []
    for i, c in enumerate(candidates):
        probes.append(c)
        owners.append(c)
        upper = candidates[i + 1] if i + 1 < len(candidates) else c + 1
        probes.append((c + upper) / 2)
        owners.append(c)
    lo, hi = 0, len(probes) - 1
    if not feasible(probes[hi]):
        return INF
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(probes[mid]):
            hi = mid
        else:
            lo = mid + 1
    return owners[lo]


def bottleneck(a: Barcode, b: Barcode) -> ExtendedTime:
    a_bars, b_bars = list(a), list(b)
    if not _infinite_bars_can_pair(a_bars, b_bars):
        return INF
    candidates = bottleneck_candidates(a_bars, b_bars)
    logger.debug("bottleneck over %d x %d bars, %d candidate(s)", len(a_bars), len(b_bars), len(candidates))
    return search_threshold(candidates, lambda d: is_delta_matchable(a_bars, b_bars, d))


def _infinite_bars_can_pair(a_bars: Sequence[Interval], b_bars: Sequence[Interval]) -> bool:
    # bars of infinite length must be matched, and only to bars with the same infinite ends
    def shape(bar: Interval):
        return (is_finite(bar.left), is_finite(bar.right))

    def count(bars):
        out = {}
        for bar in bars:
            if bar.length == INF:
                out[shape(bar)] = out.get(shape(bar), 0) + 1
        return out

    return count(a_bars) == count(b_bars)


def stability_lower_bound(a: Barcode, b: Barcode) -> ExtendedTime:
    """Half the bottleneck distance: a lower bound for the DG, DDG-formigram and DMS interleavings."""
    distance = bottleneck(a, b)
    return distance if distance == INF else distance / 2
