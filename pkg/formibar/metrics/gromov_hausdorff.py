from __future__ import annotations

import itertools
import logging
from fractions import Fraction
from typing import Optional, Tuple

from formibar.core.errors import InvalidParameterError, SizeBoundExceededError
from formibar.core.metric_space import MetricSpace
from formibar.core.tripod import Tripod, minimal_correspondences
from formibar.utils.utils import get_settings

logger = logging.getLogger(__name__)


def distortion(m_x: MetricSpace, m_y: MetricSpace, tripod: Tripod) -> Fraction:
    worst = Fraction(0)
    for (x, y), (x2, y2) in itertools.combinations(sorted(tripod.pairs), 2):
        worst = max(worst, abs(m_x.d(x, x2) - m_y.d(y, y2)))
    return worst


def best_correspondence(m_x: MetricSpace, m_y: MetricSpace, bound: Optional[int] = None) -> Tuple[Fraction, Tripod]:
    """Minimal distortion and a correspondence attaining it (first in enumeration order)."""
    bound = bound if bound is not None else get_settings().gh_bound
    if len(m_x) > bound or len(m_y) > bound:
        raise SizeBoundExceededError(
            f"Gromov-Hausdorff search limited to {bound} points per space, got {len(m_x)} and {len(m_y)}",
            sizes=(len(m_x), len(m_y)),
        )
    # dropping pairs never raises the distortion, so minimal correspondences suffice
    tripods = minimal_correspondences(m_x.points, m_y.points)
    if not tripods:
        raise InvalidParameterError("Gromov-Hausdorff distance to an empty space is undefined")
    scored = [(distortion(m_x, m_y, r), r.sorted_pairs(), r) for r in tripods]
    value, _, tripod = min(scored, key=lambda s: (s[0], s[1]))
    logger.debug("d_GH search over %d correspondence(s): distortion %s", len(tripods), value)
    return value, tripod


def gromov_hausdorff_exact(m_x: MetricSpace, m_y: MetricSpace, bound: Optional[int] = None) -> Fraction:
    value, _ = best_correspondence(m_x, m_y, bound)
    return value / 2
