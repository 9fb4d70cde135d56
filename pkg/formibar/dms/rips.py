from __future__ import annotations

import itertools
import logging
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Tuple

from formibar.core.errors import InvalidParameterError
from formibar.core.graphs import Graph
from formibar.core.timeline import DynamicGraph, from_sampler
from formibar.dms.dms import DMS, PiecewiseLinear, pair_key, validate_dms
from formibar.utils.utils import ExtendedTime, format_time, get_settings, is_finite

logger = logging.getLogger(__name__)

Segments = List[Tuple[ExtendedTime, ExtendedTime]]


def edge_sets(dms: DMS, delta: Fraction, root_denominator: Optional[int] = None) -> Tuple[Dict[FrozenSet[str], Segments], Fraction]:
    """Closed time sets where each pair is within delta, and the largest crossing rounding error."""
    denominator = root_denominator or get_settings().root_denominator
    out: Dict[FrozenSet[str], Segments] = {}
    radius = Fraction(0)
    for x, y in dms.pairs():
        f = dms.function(x, y)
        if isinstance(f, PiecewiseLinear):
            out[pair_key(x, y)] = f.sublevel_set(delta)
        else:
            segments, err = f.sublevel_set(delta, denominator)
            out[pair_key(x, y)] = segments
            radius = max(radius, err)
    return out, radius


def _within(segments: Segments, t: Fraction) -> bool:
    return any(lo <= t <= hi for lo, hi in segments)


def rips_dg(
    dms: DMS,
    delta: Fraction,
    validate_input: bool = True,
    root_denominator: Optional[int] = None,
) -> DynamicGraph:
    """Threshold graph at scale delta, taken at every time.

    All vertices (with self-loops) are alive throughout the observed domain; edge {x, x'} is
    present exactly when d(t)(x, x') <= delta.
    """
    delta = Fraction(delta)
    if delta < 0:
        raise InvalidParameterError(f"Rips scale must be nonnegative, got {delta}")
    if validate_input:
        validate_dms(dms)
    sets, radius = edge_sets(dms, delta, root_denominator)
    events = {end for segments in sets.values() for seg in segments for end in seg if is_finite(end)}
    if dms.origin is not None:
        events = {e for e in events if e >= dms.origin} | {dms.origin}

    def sampler(t: Fraction) -> Graph:
        if dms.origin is not None and t < dms.origin:
            return Graph()
        edges = [(x, y) for x, y in itertools.combinations(dms.points, 2) if _within(sets[pair_key(x, y)], t)]
        return Graph.of(dms.points, edges, loops=True)

    dg = from_sampler(dms.universe, events, sampler)
    logger.debug("R_%s: %d pair(s) -> %d critical time(s)", delta, len(sets), len(dg.crit))
    if radius:
        dg = dg.with_meta(rounding_radius=format_time(radius))
    return dg
