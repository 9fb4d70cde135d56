"""Exact interleaving distances by exhaustive search over correspondences.

The candidate discretization for DGs and formigrams: with a fixed correspondence, whether
epsilon works depends only on how the shifted critical times c +- epsilon of one side sit among
the critical times of the other (and of itself). That order only changes where
epsilon = |a - b| or epsilon = |a - b| / 2 for critical times a, b, and feasibility grows with
epsilon, so the infimum is one of those values; ``search_threshold`` also probes the open gaps
between them so that an infimum which is not attained is still found.
"""
from __future__ import annotations

import itertools
import logging
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Set

from formibar.core.errors import InvalidParameterError
from formibar.core.partitions import is_partition_morphism
from formibar.core.timeline import DynamicGraph, Formigram, merged_sample_points, require_valid
from formibar.core.tripod import Tripod, check_size, minimal_correspondences
from formibar.dms.dms import DMS, PiecewiseLinear, necessary_interleaving_condition
from formibar.metrics.bottleneck import search_threshold
from formibar.smoothing.smoothing import smooth_dg, smooth_formigram
from formibar.utils.utils import INF, ExtendedTime, get_settings, simplest_between

logger = logging.getLogger(__name__)


def epsilon_candidates(*crit_sets: Sequence[Fraction]) -> List[Fraction]:
    times = sorted({c for crit in crit_sets for c in crit})
    values = {Fraction(0)}
    for a, b in itertools.combinations(times, 2):
        values.add(b - a)
        values.add((b - a) / 2)
    return sorted(values)


def _tripods(x_universe, y_universe, size_bound: Optional[int], label: str) -> List[Tripod]:
    bound = size_bound if size_bound is not None else get_settings().size_bound
    check_size(x_universe, y_universe, bound, label)
    return minimal_correspondences(x_universe, y_universe)


class _SmoothingCache:
    def __init__(self, smooth: Callable, timeline):
        self.smooth = smooth
        self.timeline = timeline
        self.cache: Dict[Fraction, object] = {}

    def __call__(self, eps: Fraction):
        if eps not in self.cache:
            self.cache[eps] = self.smooth(self.timeline, eps, validate_input=False)
        return self.cache[eps]


# --- formigrams ---


def formigram_tripod_works(theta_x: Formigram, theta_y_smoothed: Formigram, relation: Dict[str, Iterable[str]]) -> bool:
    """One direction of the tripod condition: theta_X(t) maps into (S_eps theta_Y)(t) for every t."""
    for t in merged_sample_points(theta_x, theta_y_smoothed):
        if not is_partition_morphism(theta_x.value_at(t), theta_y_smoothed.value_at(t), relation):
            return False
    return True


def is_formigram_interleaved(
    theta_x: Formigram, theta_y: Formigram, tripod: Tripod, eps: Fraction, smooth_x=None, smooth_y=None
) -> bool:
    sx = smooth_x(eps) if smooth_x else smooth_formigram(theta_x, eps, validate_input=False)
    sy = smooth_y(eps) if smooth_y else smooth_formigram(theta_y, eps, validate_input=False)
    return formigram_tripod_works(theta_x, sy, tripod.forward()) and formigram_tripod_works(
        theta_y, sx, tripod.backward()
    )


def interleaving_formigram_exact(
    theta_x: Formigram, theta_y: Formigram, size_bound: Optional[int] = None
) -> ExtendedTime:
    require_valid(theta_x)
    require_valid(theta_y)
    tripods = _tripods(theta_x.universe, theta_y.universe, size_bound, "formigram interleaving")
    if not tripods:
        return INF
    smooth_x = _SmoothingCache(smooth_formigram, theta_x)
    smooth_y = _SmoothingCache(smooth_formigram, theta_y)

    def feasible(eps: Fraction) -> bool:
        return any(is_formigram_interleaved(theta_x, theta_y, r, eps, smooth_x, smooth_y) for r in tripods)

    candidates = epsilon_candidates(theta_x.crit, theta_y.crit)
    logger.debug("formigram interleaving: %d tripod(s), %d candidate(s)", len(tripods), len(candidates))
    return search_threshold(candidates, feasible)


# --- dynamic graphs ---


def dg_tripod_works(g_x: DynamicGraph, g_y_smoothed: DynamicGraph, relation: Dict[str, Set[str]]) -> bool:
    """Vertices of G_X(t) land in the smoothed G_Y(t); each edge (loops included) lands on edges there."""
    for t in merged_sample_points(g_x, g_y_smoothed):
        source, target = g_x.value_at(t), g_y_smoothed.value_at(t)
        for x in source.vertices:
            if not relation.get(x, frozenset()) <= target.vertices:
                return False
        for e in source.edges:
            ends = sorted(e)
            a, b = ends[0], ends[-1]
            for y in relation.get(a, ()):
                for y2 in relation.get(b, ()):
                    if frozenset((y, y2)) not in target.edges:
                        return False
    return True


def is_dg_interleaved(
    g_x: DynamicGraph, g_y: DynamicGraph, tripod: Tripod, eps: Fraction, smooth_x=None, smooth_y=None
) -> bool:
    sx = smooth_x(eps) if smooth_x else smooth_dg(g_x, eps, validate_input=False)
    sy = smooth_y(eps) if smooth_y else smooth_dg(g_y, eps, validate_input=False)
    return dg_tripod_works(g_x, sy, tripod.forward()) and dg_tripod_works(g_y, sx, tripod.backward())


def interleaving_dg_exact(g_x: DynamicGraph, g_y: DynamicGraph, size_bound: Optional[int] = None) -> ExtendedTime:
    require_valid(g_x)
    require_valid(g_y)
    tripods = _tripods(g_x.universe, g_y.universe, size_bound, "DG interleaving")
    if not tripods:
        return INF
    smooth_x = _SmoothingCache(smooth_dg, g_x)
    smooth_y = _SmoothingCache(smooth_dg, g_y)

    def feasible(eps: Fraction) -> bool:
        return any(is_dg_interleaved(g_x, g_y, r, eps, smooth_x, smooth_y) for r in tripods)

    candidates = epsilon_candidates(g_x.crit, g_y.crit)
    logger.debug("DG interleaving: %d tripod(s), %d candidate(s)", len(tripods), len(candidates))
    return search_threshold(candidates, feasible)


# --- dynamic metric spaces ---


def _line_through(f: PiecewiseLinear, u: Fraction, shift: Fraction):
    """f(t + shift) as (slope, intercept) in t, for t near u - shift."""
    slope, intercept = f.line_at(u)
    return slope, intercept + slope * shift


def _window_min(f: PiecewiseLinear, t: Fraction, eps: Fraction, origin: Optional[Fraction]) -> Fraction:
    lo = t - eps
    if origin is not None and lo < origin:
        lo = origin
    return f.window_min(lo, t + eps)


def _pair_dominated(
    f: PiecewiseLinear,
    h: Optional[PiecewiseLinear],
    eps: Fraction,
    slack: Fraction,
    f_origin: Optional[Fraction],
    start: Optional[Fraction],
) -> bool:
    """min over [t-eps, t+eps] of f  <=  h(t) + slack, for every t >= start (every t when None).

    On each stretch between events the left side is a minimum of lines (concave) and the right
    side is a line, so the excess peaks at an event, at a kink of the minimum, or never does on an
    unbounded stretch whose final slope is nonpositive.
    """
    events: Set[Fraction] = set()
    for b in f.breakpoints:
        events.update((b - eps, b + eps))
    if h is not None:
        events.update(h.breakpoints)
    if f_origin is not None:
        events.add(f_origin + eps)
    if start is not None:
        events = {e for e in events if e > start} | {start}
    grid = sorted(events) or [Fraction(0)]

    def excess(t: Fraction) -> Fraction:
        right = h(t) if h is not None else Fraction(0)
        return _window_min(f, t, eps, f_origin) - right - slack

    def lines(mid: Fraction):
        out = []
        if f_origin is not None and mid - eps < f_origin:
            out.append((Fraction(0), f(f_origin)))
        else:
            out.append(_line_through(f, mid - eps, -eps))
        out.append(_line_through(f, mid + eps, eps))
        lo = mid - eps if f_origin is None else max(mid - eps, f_origin)
        inside = f.min_value(*f.breakpoint_range(lo, mid + eps))
        if inside is not None:
            out.append((Fraction(0), inside))
        return out

    def kinks(mid: Fraction, lo: ExtendedTime, hi: ExtendedTime) -> List[Fraction]:
        found = []
        for (s1, c1), (s2, c2) in itertools.combinations(lines(mid), 2):
            if s1 != s2:
                t = (c2 - c1) / (s1 - s2)
                if lo < t < hi:
                    found.append(t)
        return found

    tests = list(grid)
    for lo, hi in zip(grid, grid[1:]):
        tests.extend(kinks((lo + hi) / 2, lo, hi))
    if any(excess(t) > 0 for t in tests):
        return False
    # unbounded stretches: past the last kink the excess is linear
    right_kinks = kinks(grid[-1] + 1, grid[-1], INF)
    beyond = max([grid[-1]] + right_kinks) + 1
    if any(excess(t) > 0 for t in right_kinks) or excess(beyond) > 0 or excess(beyond + 1) > excess(beyond):
        return False
    if start is None:
        left_kinks = kinks(grid[0] - 1, -INF, grid[0])
        before = min([grid[0]] + left_kinks) - 1
        if any(excess(t) > 0 for t in left_kinks) or excess(before) > 0 or excess(before - 1) > excess(before):
            return False
    return True


def _observation_start(gamma_x: DMS, gamma_y: DMS) -> Optional[Fraction]:
    origins = [o for o in (gamma_x.origin, gamma_y.origin) if o is not None]
    return max(origins) if origins else None


def dms_tripod_works(gamma_x: DMS, gamma_y: DMS, tripod: Tripod, eps: Fraction, lam: Fraction) -> bool:
    """One direction: the eps-window minimum of d_X is dominated by d_Y(t) + lam * eps through the tripod."""
    start = _observation_start(gamma_x, gamma_y)
    pairs = sorted(tripod.pairs)
    for (x, y), (x2, y2) in itertools.combinations(pairs, 2):
        if x == x2:
            continue
        h = None if y == y2 else gamma_y.function(y, y2)
        if not _pair_dominated(gamma_x.function(x, x2), h, eps, lam * eps, gamma_x.origin, start):
            return False
    return True


def is_dms_interleaved(gamma_x: DMS, gamma_y: DMS, tripod: Tripod, eps: Fraction, lam: Fraction = Fraction(0)) -> bool:
    return dms_tripod_works(gamma_x, gamma_y, tripod, eps, lam) and dms_tripod_works(
        gamma_y, gamma_x, tripod.inverse(), eps, lam
    )


def _dms_span(gamma_x: DMS, gamma_y: DMS) -> Fraction:
    times = gamma_x.breakpoints() + gamma_y.breakpoints()
    values = [v for g in (gamma_x, gamma_y) for f in g.dist.values() for v in f.values]
    return (max(times) - min(times) if times else Fraction(0)) + max(values, default=Fraction(0))


def interleaving_dms_exact(
    gamma_x: DMS,
    gamma_y: DMS,
    lam: Fraction = Fraction(0),
    size_bound: Optional[int] = None,
    tolerance: Optional[Fraction] = None,
) -> ExtendedTime:
    """lam-slack interleaving distance of two piecewise-linear DMSs.

    Bisection on epsilon down to the tolerance, then snapped to the simplest rational in the
    final bracket when that value is itself feasible.
    """
    lam = Fraction(lam)
    if lam < 0:
        raise InvalidParameterError(f"slack must be nonnegative, got {lam}")
    gamma_x.require_piecewise_linear()
    gamma_y.require_piecewise_linear()
    tolerance = Fraction(tolerance) if tolerance is not None else get_settings().bisection_tolerance
    tripods = _tripods(gamma_x.universe, gamma_y.universe, size_bound, "DMS interleaving")
    if not tripods:
        return INF
    if lam == 0 and not necessary_interleaving_condition(gamma_x, gamma_y):
        logger.debug("cardinality obstruction: no finite interleaving")
        return INF

    def feasible(eps: Fraction) -> bool:
        return any(is_dms_interleaved(gamma_x, gamma_y, r, eps, lam) for r in tripods)

    if feasible(Fraction(0)):
        return Fraction(0)
    hi = _dms_span(gamma_x, gamma_y) + 1
    if lam > 0:
        hi += max((v for g in (gamma_x, gamma_y) for f in g.dist.values() for v in f.values), default=0) / lam
    for _ in range(6):
        if feasible(hi):
            break
        hi *= 2
    else:
        logger.debug("no feasible epsilon up to %s", hi)
        return INF
    lo = Fraction(0)
    while hi - lo > tolerance:
        mid = (lo + hi) / 2
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    snapped = simplest_between(lo, hi)
    if snapped > lo and feasible(snapped):
        return snapped
    return hi
