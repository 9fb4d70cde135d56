from __future__ import annotations

import itertools
import logging
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple, Union

import sympy

from formibar.core.errors import EmptyIntervalError, InvalidDMSError, NonPiecewiseLinearError
from formibar.core.graphs import Graph
from formibar.core.intervals import Interval
from formibar.core.metric_space import MetricSpace
from formibar.core.timeline import DynamicGraph, from_sampler
from formibar.utils.utils import INF, ExtendedTime, is_finite

logger = logging.getLogger(__name__)

Line = Tuple[Fraction, Fraction]  # (slope, intercept) in the global time variable


@dataclass(frozen=True)
class PiecewiseLinear:
    """Continuous PL function: linear between breakpoints, with linear tails."""

    breakpoints: Tuple[Fraction, ...]
    values: Tuple[Fraction, ...]
    left_slope: Fraction = Fraction(0)
    right_slope: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "breakpoints", tuple(Fraction(b) for b in self.breakpoints))
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))
        object.__setattr__(self, "left_slope", Fraction(self.left_slope))
        object.__setattr__(self, "right_slope", Fraction(self.right_slope))
        if not self.breakpoints:
            raise InvalidDMSError("a piecewise-linear function needs at least one breakpoint")
        if len(self.values) != len(self.breakpoints):
            raise InvalidDMSError("one value per breakpoint")
        if any(a >= b for a, b in zip(self.breakpoints, self.breakpoints[1:])):
            raise InvalidDMSError("breakpoints must be strictly increasing")

    @classmethod
    def constant(cls, value) -> "PiecewiseLinear":
        return cls((Fraction(0),), (Fraction(value),))

    def line_at(self, u: Fraction) -> Line:
        """The linear formula in force around u (the right-hand piece at a breakpoint)."""
        bps, vals = self.breakpoints, self.values
        if u < bps[0]:
            return self.left_slope, vals[0] - self.left_slope * bps[0]
        i = bisect_right(bps, u) - 1
        if i >= len(bps) - 1:
            return self.right_slope, vals[-1] - self.right_slope * bps[-1]
        slope = (vals[i + 1] - vals[i]) / (bps[i + 1] - bps[i])
        return slope, vals[i] - slope * bps[i]

    def __call__(self, t: Fraction) -> Fraction:
        slope, intercept = self.line_at(t)
        return slope * t + intercept

    def pieces(self) -> List[Tuple[ExtendedTime, ExtendedTime, Line]]:
        bps = self.breakpoints
        out = [(-INF, bps[0], self.line_at(bps[0] - 1))]
        for a, b in zip(bps, bps[1:]):
            out.append((a, b, self.line_at((a + b) / 2)))
        out.append((bps[-1], INF, self.line_at(bps[-1] + 1)))
        return out

    @cached_property
    def _min_table(self) -> List[Tuple[Fraction, ...]]:
        # sparse table: row k holds minima of runs of 2**k consecutive values
        table = [self.values]
        span = 1
        while 2 * span <= len(self.values):
            prev = table[-1]
            table.append(tuple(min(prev[i], prev[i + span]) for i in range(len(prev) - span)))
            span *= 2
        return table

    def min_value(self, start: int, end: int) -> Optional[Fraction]:
        """Minimum of values[start:end], or None when the range is empty."""
        if start >= end:
            return None
        k = (end - start).bit_length() - 1
        row = self._min_table[k]
        return min(row[start], row[end - (1 << k)])

    def breakpoint_range(self, lo: ExtendedTime, hi: ExtendedTime) -> Tuple[int, int]:
        bps = self.breakpoints
        start = 0 if not is_finite(lo) else bisect_left(bps, lo)
        end = len(bps) if not is_finite(hi) else bisect_right(bps, hi)
        return start, end

    def window_min(self, lo: ExtendedTime, hi: ExtendedTime) -> ExtendedTime:
        """Exact minimum over [lo, hi]; infinite ends follow the tail slopes."""
        candidates: List[ExtendedTime] = []
        if is_finite(lo):
            candidates.append(self(lo))
        elif self.left_slope > 0:
            return -INF
        if is_finite(hi):
            candidates.append(self(hi))
        elif self.right_slope < 0:
            return -INF
        inside = self.min_value(*self.breakpoint_range(lo, hi))
        if inside is not None:
            candidates.append(inside)
        return min(candidates)

    def scaled(self, factor: Fraction) -> "PiecewiseLinear":
        factor = Fraction(factor)
        return PiecewiseLinear(
            self.breakpoints,
            tuple(v * factor for v in self.values),
            self.left_slope * factor,
            self.right_slope * factor,
        )

    def shifted(self, tau: Fraction) -> "PiecewiseLinear":
        """t -> f(t + tau)."""
        return PiecewiseLinear(tuple(b - tau for b in self.breakpoints), self.values, self.left_slope, self.right_slope)

    def sublevel_set(self, level: Fraction) -> List[Tuple[ExtendedTime, ExtendedTime]]:
        """{t : f(t) <= level} as disjoint closed intervals (ends may be infinite)."""
        parts = []
        for lo, hi, (slope, intercept) in self.pieces():
            part = _linear_sublevel(slope, intercept, level, lo, hi)
            if part is not None:
                parts.append(part)
        return merge_closed(parts)


def _linear_sublevel(slope, intercept, level, lo, hi) -> Optional[Tuple[ExtendedTime, ExtendedTime]]:
    if slope == 0:
        return (lo, hi) if intercept <= level else None
    root = (level - intercept) / slope
    if slope > 0:
        lo2, hi2 = lo, min(hi, root)
    else:
        lo2, hi2 = max(lo, root), hi
    if lo2 > hi2:
        return None
    return lo2, hi2


def merge_closed(parts: Iterable[Tuple[ExtendedTime, ExtendedTime]]) -> List[Tuple[ExtendedTime, ExtendedTime]]:
    merged: List[List[ExtendedTime]] = []
    for lo, hi in sorted(parts, key=lambda p: p[0]):
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return [(lo, hi) for lo, hi in merged]


@dataclass(frozen=True)
class PiecewiseQuadratic:
    """Squared distance of two linearly moving points: quadratic between breakpoints, flat tails.

    ``coefficients[i] = (a, b, c)`` gives a*s^2 + b*s + c with s = t - breakpoints[i] on
    [breakpoints[i], breakpoints[i+1]].
    """

    breakpoints: Tuple[Fraction, ...]
    coefficients: Tuple[Tuple[Fraction, Fraction, Fraction], ...]

    def __post_init__(self):
        object.__setattr__(self, "breakpoints", tuple(Fraction(b) for b in self.breakpoints))
        object.__setattr__(
            self, "coefficients", tuple(tuple(Fraction(v) for v in abc) for abc in self.coefficients)
        )
        if len(self.breakpoints) < 2:
            raise InvalidDMSError("a piecewise-quadratic function needs at least two breakpoints")
        if any(a >= b for a, b in zip(self.breakpoints, self.breakpoints[1:])):
            raise InvalidDMSError("breakpoints must be strictly increasing")
        if len(self.coefficients) != len(self.breakpoints) - 1:
            raise InvalidDMSError("one quadratic per piece")

    def _clamp(self, t: ExtendedTime) -> Fraction:
        bps = self.breakpoints
        if t <= bps[0]:
            return bps[0]
        if t >= bps[-1]:
            return bps[-1]
        return t

    def squared(self, t: ExtendedTime) -> Fraction:
        t = self._clamp(t)
        i = min(bisect_right(self.breakpoints, t) - 1, len(self.coefficients) - 1)
        a, b, c = self.coefficients[i]
        s = t - self.breakpoints[i]
        return a * s * s + b * s + c

    def __call__(self, t: Fraction) -> Union[Fraction, float]:
        return exact_sqrt(self.squared(t))

    def window_min_squared(self, lo: ExtendedTime, hi: ExtendedTime) -> Fraction:
        """Exact minimum of the squared distance over [lo, hi]; flat tails reduce it to a clamp."""
        lo, hi = self._clamp(lo), self._clamp(hi)
        bps = self.breakpoints
        points = [self.squared(lo), self.squared(hi)]
        for i, (a, b, _) in enumerate(self.coefficients):
            left, right = max(bps[i], lo), min(bps[i + 1], hi)
            if left > right:
                continue
            points.extend([self.squared(left), self.squared(right)])
            if a > 0:
                vertex = bps[i] - b / (2 * a)
                if left <= vertex <= right:
                    points.append(self.squared(vertex))
        return min(points)

    def sublevel_set(
        self, level: Fraction, denominator: int = 10**6
    ) -> Tuple[List[Tuple[ExtendedTime, ExtendedTime]], Fraction]:
        """{t : distance(t) <= level} as closed intervals, plus the largest root-rounding error."""
        target = Fraction(level) ** 2
        bps = self.breakpoints
        parts: List[Tuple[ExtendedTime, ExtendedTime]] = []
        radius = Fraction(0)
        if self.squared(bps[0]) <= target:
            parts.append((-INF, bps[0]))
        if self.squared(bps[-1]) <= target:
            parts.append((bps[-1], INF))
        for i, (a, b, c) in enumerate(self.coefficients):
            lo, hi = bps[i], bps[i + 1]
            roots, err = quadratic_roots(a, b, c - target, denominator)
            radius = max(radius, err)
            cuts = sorted({lo, hi} | {lo + r for r in roots if lo < lo + r < hi})
            for u, v in zip(cuts, cuts[1:]):
                if self.squared((u + v) / 2) <= target:
                    parts.append((u, v))
            parts.extend((u, u) for u in cuts if self.squared(u) <= target)
        return merge_closed(parts), radius


def exact_sqrt(value: Fraction) -> Union[Fraction, float]:
    """Square root as a Fraction when it is rational, else as a float."""
    root = sympy.sqrt(sympy.Rational(value.numerator, value.denominator))
    if root.is_Rational:
        return Fraction(int(root.p), int(root.q))
    return float(root)


def quadratic_roots(a: Fraction, b: Fraction, c: Fraction, denominator: int) -> Tuple[List[Fraction], Fraction]:
    """Real roots of a*s^2 + b*s + c, irrational ones rounded to the denominator bound.

    Returns the roots and the largest rounding error.
    """
    if a == 0:
        if b == 0:
            return [], Fraction(0)
        return [-c / b], Fraction(0)
    disc = b * b - 4 * a * c
    if disc < 0:
        return [], Fraction(0)
    sqrt_disc = sympy.sqrt(sympy.Rational(disc.numerator, disc.denominator))
    if sqrt_disc.is_Rational:
        d = Fraction(int(sqrt_disc.p), int(sqrt_disc.q))
        return sorted({(-b - d) / (2 * a), (-b + d) / (2 * a)}), Fraction(0)
    roots: List[Fraction] = []
    radius = Fraction(0)
    for sign in (-1, 1):
        exact = (sympy.Rational(-b.numerator, b.denominator) + sign * sqrt_disc) / sympy.Rational(
            2 * a.numerator, a.denominator
        )
        approx = Fraction(str(sympy.N(exact, 40))).limit_denominator(denominator)
        error = abs(Fraction(str(sympy.N(exact - sympy.Rational(approx.numerator, approx.denominator), 30))))
        logger.warning("irrational crossing %s rounded to %s (error %.3g)", exact, approx, float(error))
        roots.append(approx)
        radius = max(radius, error)
    return sorted(roots), radius


Distance = Union[PiecewiseLinear, PiecewiseQuadratic]


def pair_key(x: str, y: str) -> FrozenSet[str]:
    return frozenset((x, y))


@dataclass(frozen=True)
class DMS:
    """Dynamic metric space: one distance function of time per unordered pair of points.

    With ``origin`` set, the space is only observed on [origin, inf): checks run there and
    time windows are clipped to it.
    """

    points: Tuple[str, ...]
    dist: Mapping[FrozenSet[str], Distance]
    origin: Optional[Fraction] = None
    meta: Tuple[Tuple[str, str], ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(sorted(set(self.points))))
        object.__setattr__(self, "dist", dict(self.dist))
        if self.origin is not None:
            object.__setattr__(self, "origin", Fraction(self.origin))
        for x, y in itertools.combinations(self.points, 2):
            if pair_key(x, y) not in self.dist:
                raise InvalidDMSError(f"missing distance function for pair ({x}, {y})")

    def __hash__(self):
        return hash((self.points, self.origin))

    @property
    def universe(self) -> FrozenSet[str]:
        return frozenset(self.points)

    def pairs(self) -> List[Tuple[str, str]]:
        return list(itertools.combinations(self.points, 2))

    def function(self, x: str, y: str) -> Distance:
        return self.dist[pair_key(x, y)]

    @property
    def is_piecewise_linear(self) -> bool:
        return all(isinstance(f, PiecewiseLinear) for f in self.dist.values())

    def require_piecewise_linear(self) -> None:
        if not self.is_piecewise_linear:
            raise NonPiecewiseLinearError("exact DMS interleaving needs piecewise-linear distances, not trajectory-backed ones")

    def distance(self, x: str, y: str, t: Fraction) -> Union[Fraction, float]:
        if x == y:
            return Fraction(0)
        return self.function(x, y)(t)

    def breakpoints(self) -> List[Fraction]:
        out = set()
        for f in self.dist.values():
            out.update(f.breakpoints)
        if self.origin is not None:
            out.add(self.origin)
        return sorted(out)

    def clip(self, lo: ExtendedTime, hi: ExtendedTime) -> Tuple[ExtendedTime, ExtendedTime]:
        if self.origin is not None and (not is_finite(lo) or lo < self.origin):
            lo = self.origin
        return lo, hi


def validate_dms(dms: DMS) -> DMS:
    """Raise InvalidDMSError unless every d(t) is a pseudo-metric and some d(t0) is a metric."""
    for key, f in dms.dist.items():
        if isinstance(f, PiecewiseLinear):
            if any(f(t) < 0 for t in _grid_points(dms)):
                raise InvalidDMSError(f"negative distance for pair {sorted(key)}")
            if dms.origin is None and f.left_slope > 0:
                raise InvalidDMSError(f"distance for pair {sorted(key)} turns negative on the left tail")
            if f.right_slope < 0:
                raise InvalidDMSError(f"distance for pair {sorted(key)} turns negative on the right tail")
    if dms.is_piecewise_linear and len(dms.points) >= 3:
        _check_triangles(dms)
    if len(dms.points) >= 2 and not _has_metric_time(dms):
        raise InvalidDMSError("the distances are never all positive at once")
    return dms


def _grid_points(dms: DMS) -> List[Fraction]:
    grid = dms.breakpoints()
    points = list(grid)
    points.extend((a + b) / 2 for a, b in zip(grid, grid[1:]))
    points.extend([grid[0] - 1, grid[-1] + 1] if grid else [Fraction(0)])
    if dms.origin is not None:
        points = [p for p in points if p >= dms.origin]
    return sorted(set(points))


def _check_triangles(dms: DMS) -> None:
    # linear on every piece of the common grid, so grid points plus tail slopes decide it
    for x, y, z in itertools.permutations(dms.points, 3):
        if x > z:
            continue
        fxz, fxy, fyz = dms.function(x, z), dms.function(x, y), dms.function(y, z)
        for t in _grid_points(dms):
            if fxz(t) > fxy(t) + fyz(t):
                raise InvalidDMSError(f"triangle inequality fails for ({x},{y},{z}) at t={t}")
        if fxz.right_slope > fxy.right_slope + fyz.right_slope:
            raise InvalidDMSError(f"triangle inequality fails for ({x},{y},{z}) on the right tail")
        if dms.origin is None and fxz.left_slope < fxy.left_slope + fyz.left_slope:
            raise InvalidDMSError(f"triangle inequality fails for ({x},{y},{z}) on the left tail")


def _has_metric_time(dms: DMS) -> bool:
    grid = dms.breakpoints()
    probes = set(_grid_points(dms))
    for a, b in zip(grid, grid[1:]):
        probes.update([a + (b - a) / 3, a + 2 * (b - a) / 3])
    for t in sorted(probes):
        if all(dms.distance(x, y, t) > 0 for x, y in dms.pairs()):
            return True
    if not dms.is_piecewise_linear:
        return False
    # PL pieces: intersect the open sets where each linear piece is positive
    edges = ([dms.origin] if dms.origin is not None else [-INF]) + [g for g in grid if dms.origin is None or g > dms.origin] + [INF]
    for lo, hi in zip(edges, edges[1:]):
        low, high = lo, hi
        probe = _probe(lo, hi)
        for x, y in dms.pairs():
            slope, intercept = dms.function(x, y).line_at(probe)
            if slope == 0:
                if intercept <= 0:
                    low, high = 0, -1
                    break
                continue
            root = -intercept / slope
            if slope > 0:
                low = max(low, root)
            else:
                high = min(high, root)
        if low < high:
            return True
    return False


def _probe(lo: ExtendedTime, hi: ExtendedTime) -> Fraction:
    if is_finite(lo) and is_finite(hi):
        return (lo + hi) / 2
    if is_finite(lo):
        return lo + 1
    if is_finite(hi):
        return hi - 1
    return Fraction(0)


def window_min_distance(dms: DMS, interval: Interval) -> Dict[FrozenSet[str], Union[Fraction, float]]:
    """Per-pair minimum of the distance over a time window."""
    lo, hi = dms.clip(interval.left, interval.right)
    if is_finite(lo) and is_finite(hi) and lo > hi:
        raise EmptyIntervalError(f"window {interval} lies before the observation origin {dms.origin}")
    out = {}
    for x, y in dms.pairs():
        f = dms.function(x, y)
        if isinstance(f, PiecewiseLinear):
            out[pair_key(x, y)] = f.window_min(lo, hi)
        else:
            out[pair_key(x, y)] = exact_sqrt(f.window_min_squared(lo, hi))
    return out


def constant_dms(space: MetricSpace) -> DMS:
    dist = {pair_key(x, y): PiecewiseLinear.constant(space.d(x, y)) for x, y in space.pairs()}
    return DMS(space.points, dist)


def scaled_dms(space: MetricSpace, psi: PiecewiseLinear) -> DMS:
    """d(t) = psi(t) * d' for a fixed metric d' and a nonnegative PL modulation psi."""
    dist = {pair_key(x, y): psi.scaled(space.d(x, y)) for x, y in space.pairs()}
    return DMS(space.points, dist)


def dms_from_ultrametric(space: MetricSpace) -> DMS:
    """d(t)(x, x') = max(0, u(x, x') - t), observed from t = 0 on.

    Before t = 0 the formula would give d(t)(x, x) = -t > 0, so the space starts at the origin.
    """
    space.require_ultrametric()
    dist = {}
    for x, y in space.pairs():
        value = space.d(x, y)
        dist[pair_key(x, y)] = PiecewiseLinear((Fraction(0), value), (value, Fraction(0)), Fraction(-1), Fraction(0))
    return DMS(space.points, dist, origin=Fraction(0))


def dms_from_metric_filtration(space: MetricSpace) -> DynamicGraph:
    """Vertices from t = 0 on; edge {x, x'} once t >= d(x, x')."""
    events = {Fraction(0)} | {space.d(x, y) for x, y in space.pairs() if space.d(x, y) > 0}

    def sampler(t: Fraction) -> Graph:
        if t < 0:
            return Graph()
        edges = [(x, y) for x, y in space.pairs() if space.d(x, y) <= t]
        return Graph.of(space.points, edges, loops=True)

    return from_sampler(frozenset(space.points), events, sampler)


def necessary_interleaving_condition(gamma_x: DMS, gamma_y: DMS) -> bool:
    """False when the point counts alone rule out any finite interleaving at zero slack.

    A larger space whose degenerate times (some pair at distance 0) stay bounded cannot be
    squeezed into a smaller one forever.
    """
    if len(gamma_x.points) > len(gamma_y.points) and _degenerate_times_bounded(gamma_x):
        return False
    if len(gamma_y.points) > len(gamma_x.points) and _degenerate_times_bounded(gamma_y):
        return False
    return True


def _degenerate_times_bounded(dms: DMS) -> bool:
    if not dms.is_piecewise_linear:
        return False
    for f in dms.dist.values():
        if f.values[-1] == 0 and f.right_slope == 0:
            return False
        if dms.origin is None and f.values[0] == 0 and f.left_slope == 0:
            return False
    return True
