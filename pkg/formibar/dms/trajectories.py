from __future__ import annotations

import logging
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

import pandas as pd
import sympy

from formibar.core.errors import FormatError, InvalidDMSError
from formibar.dms.dms import DMS, Distance, PiecewiseLinear, PiecewiseQuadratic, pair_key
from formibar.utils.utils import format_time, to_fraction

logger = logging.getLogger(__name__)

Sample = Tuple[Fraction, Tuple[Fraction, ...]]


@dataclass(frozen=True)
class TrajectorySet:
    """Piecewise-linear paths in R^d, one per point, held constant outside their sample range."""

    dimension: int
    paths: Mapping[str, Tuple[Sample, ...]]

    def __post_init__(self):
        paths = {}
        for point, rows in self.paths.items():
            rows = tuple((Fraction(t), tuple(Fraction(c) for c in coords)) for t, coords in rows)
            if not rows:
                raise InvalidDMSError(f"trajectory {point} has no samples")
            for t, coords in rows:
                if len(coords) != self.dimension:
                    raise InvalidDMSError(
                        f"trajectory {point} has a {len(coords)}-dimensional sample at t={t}, expected {self.dimension}"
                    )
            times = [t for t, _ in rows]
            if any(a >= b for a, b in zip(times, times[1:])):
                raise InvalidDMSError(f"trajectory {point} has unsorted or repeated times")
            paths[point] = rows
        object.__setattr__(self, "paths", paths)

    @property
    def points(self) -> List[str]:
        return sorted(self.paths)

    def times(self, point: Optional[str] = None) -> List[Fraction]:
        if point is not None:
            return [t for t, _ in self.paths[point]]
        return sorted({t for rows in self.paths.values() for t, _ in rows})

    def position(self, point: str, t: Fraction) -> Tuple[Fraction, ...]:
        rows = self.paths[point]
        if t <= rows[0][0]:
            return rows[0][1]
        if t >= rows[-1][0]:
            return rows[-1][1]
        i = bisect_right([r[0] for r in rows], t) - 1
        (t0, p0), (t1, p1) = rows[i], rows[i + 1]
        w = (t - t0) / (t1 - t0)
        return tuple(a + w * (b - a) for a, b in zip(p0, p1))

    def velocity(self, point: str, t: Fraction) -> Tuple[Fraction, ...]:
        """Right derivative at t (zero outside the sample range)."""
        rows = self.paths[point]
        if t < rows[0][0] or t >= rows[-1][0]:
            return tuple(Fraction(0) for _ in range(self.dimension))
        i = bisect_right([r[0] for r in rows], t) - 1
        (t0, p0), (t1, p1) = rows[i], rows[i + 1]
        return tuple((b - a) / (t1 - t0) for a, b in zip(p0, p1))


def _dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def _rational_sqrt(value: Fraction) -> Optional[Fraction]:
    root = sympy.sqrt(sympy.Rational(value.numerator, value.denominator))
    if root.is_Rational:
        return Fraction(int(root.p), int(root.q))
    return None


def pair_distance(trajectories: TrajectorySet, x: str, y: str) -> Distance:
    """Euclidean distance between two trajectories.

    Stored as a PL function when every piece of the squared distance is the square of a
    nonnegative linear function, and as the piecewise quadratic otherwise.
    """
    grid = sorted(set(trajectories.times(x)) | set(trajectories.times(y)))
    if len(grid) == 1:
        grid = [grid[0], grid[0] + 1]
    coefficients = []
    for t0, t1 in zip(grid, grid[1:]):
        delta = [a - b for a, b in zip(trajectories.position(x, t0), trajectories.position(y, t0))]
        v = [a - b for a, b in zip(trajectories.velocity(x, t0), trajectories.velocity(y, t0))]
        coefficients.append((_dot(v, v), 2 * _dot(delta, v), _dot(delta, delta)))
    quadratic = PiecewiseQuadratic(tuple(grid), tuple(coefficients))
    linear = _as_linear(quadratic)
    return linear if linear is not None else quadratic


def _as_linear(q: PiecewiseQuadratic) -> Optional[PiecewiseLinear]:
    values = []
    for b in q.breakpoints:
        root = _rational_sqrt(q.squared(b))
        if root is None:
            return None
        values.append(root)
    candidate = PiecewiseLinear(q.breakpoints, tuple(values))
    for i, (a, b, c) in enumerate(q.coefficients):
        slope, _ = candidate.line_at(q.breakpoints[i])
        # (slope*s + sqrt(c))^2 must reproduce the piece
        if slope * slope != a or 2 * slope * values[i] != b:
            return None
    return candidate


def dms_from_trajectories(trajectories: TrajectorySet) -> DMS:
    points = trajectories.points
    dist = {}
    for i, x in enumerate(points):
        for y in points[i + 1:]:
            dist[pair_key(x, y)] = pair_distance(trajectories, x, y)
    quadratic = sum(1 for f in dist.values() if isinstance(f, PiecewiseQuadratic))
    logger.debug("DMS from %d trajectories: %d of %d pair(s) piecewise quadratic", len(points), quadratic, len(dist))
    return DMS(tuple(points), dist, meta=(("source", "trajectories"),))


def read_trajectories_csv(path: Union[str, Path]) -> TrajectorySet:
    """Rows ``point_id,time,x1,...,xd``; numbers are exact fractions or decimals."""
    try:
        frame = pd.read_csv(path, dtype=str, skipinitialspace=True, comment="#")
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise FormatError(f"cannot read trajectory CSV {path}: {e}") from e
    columns = list(frame.columns)
    if columns[:2] != ["point_id", "time"] or len(columns) < 3:
        raise FormatError(f"{path}: expected header point_id,time,x1,...,xd, got {','.join(columns)}")
    coords = columns[2:]
    if coords != [f"x{i + 1}" for i in range(len(coords))]:
        raise FormatError(f"{path}: coordinate columns must be x1..x{len(coords)}")
    if frame.isnull().values.any():
        raise FormatError(f"{path}: missing values")

    paths: Dict[str, List[Sample]] = {}
    for row in frame.itertuples(index=False):
        paths.setdefault(row[0], []).append((to_fraction(row[1]), tuple(to_fraction(c) for c in row[2:])))
    return TrajectorySet(len(coords), {point: tuple(rows) for point, rows in paths.items()})


def write_trajectories_csv(trajectories: TrajectorySet, path: Union[str, Path]) -> None:
    columns = ["point_id", "time"] + [f"x{i + 1}" for i in range(trajectories.dimension)]
    rows = []
    for point in trajectories.points:
        for t, coords in trajectories.paths[point]:
            rows.append([point, format_time(t)] + [format_time(c) for c in coords])
    pd.DataFrame(rows, columns=columns).to_csv(path, index=False, lineterminator="\n")
