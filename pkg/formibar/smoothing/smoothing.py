from __future__ import annotations

import logging
from fractions import Fraction
from functools import reduce
from typing import List, Optional

from formibar.core.errors import InvalidParameterError
from formibar.core.graphs import Graph
from formibar.core.intervals import Barcode, Interval
from formibar.core.partitions import SubPartition, finest_common_coarsening
from formibar.core.timeline import DynamicGraph, Formigram, Timeline, from_sampler, require_valid

logger = logging.getLogger(__name__)


def window(t: Fraction, eps: Fraction) -> Interval:
    """The closed window [t - eps, t + eps]."""
    return Interval.closed(t - eps, t + eps)


def union_over_interval(dg: DynamicGraph, interval: Interval) -> Graph:
    values = dg.values_meeting(interval)
    return reduce(Graph.union, values, Graph())


def coarsen_over_interval(formigram: Formigram, interval: Interval) -> SubPartition:
    return finest_common_coarsening(formigram.values_meeting(interval))


def _candidate_times(timeline: Timeline, eps: Fraction) -> List[Fraction]:
    # the smoothed value can only change where a window endpoint crosses a critical time
    return sorted({c - eps for c in timeline.crit} | {c + eps for c in timeline.crit})


def _check_eps(eps: Fraction) -> Fraction:
    eps = Fraction(eps)
    if eps < 0:
        raise InvalidParameterError(f"smoothing parameter must be nonnegative, got {eps}")
    return eps


def smooth_dg(dg: DynamicGraph, eps: Fraction, validate_input: bool = True) -> DynamicGraph:
    eps = _check_eps(eps)
    if validate_input:
        require_valid(dg)
    if eps == 0:
        return dg
    smoothed = from_sampler(dg.universe, _candidate_times(dg, eps), lambda t: union_over_interval(dg, window(t, eps)))
    logger.debug("S_%s on a DG: %d -> %d critical time(s)", eps, len(dg.crit), len(smoothed.crit))
    return smoothed


def smooth_formigram(formigram: Formigram, eps: Fraction, validate_input: bool = True) -> Formigram:
    eps = _check_eps(eps)
    if validate_input:
        require_valid(formigram)
    if eps == 0:
        return formigram
    smoothed = from_sampler(
        formigram.universe,
        _candidate_times(formigram, eps),
        lambda t: coarsen_over_interval(formigram, window(t, eps)),
    )
    logger.debug("S_%s on a formigram: %d -> %d critical time(s)", eps, len(formigram.crit), len(smoothed.crit))
    return smoothed


def _smooth_bar(bar: Interval, eps: Fraction) -> Optional[Interval]:
    if not bar.left_closed and not bar.right_closed:
        if bar.length != float("inf") and bar.length <= 2 * eps:
            return None
        return bar.shifted(eps, -eps)
    if bar.left_closed and not bar.right_closed:
        return bar.shifted(-eps, -eps)
    if not bar.left_closed and bar.right_closed:
        return bar.shifted(eps, eps)
    return bar.shifted(-eps, eps)


def smooth_barcode(barcode: Barcode, eps: Fraction) -> Barcode:
    """Effect of S_eps on a formigram barcode, read off each bar's endpoint types.

    Open bars shrink by eps on both sides and vanish once no longer than 2*eps, closed bars
    grow, half-open bars slide.
    """
    eps = _check_eps(eps)
    out = []
    for bar in barcode:
        smoothed = _smooth_bar(bar, eps)
        if smoothed is not None:
            out.append(smoothed)
    return Barcode.of(out)


def is_saturated(formigram: Formigram) -> bool:
    return all(value.is_full for value in formigram.levels())
