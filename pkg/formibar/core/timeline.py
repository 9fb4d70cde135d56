from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import (
    Callable,
    FrozenSet,
    Generic,
    Iterable,
    Iterator,
    List,
    Optional,
    Sequence,
    Tuple,
    TypeVar,
    Union,
)

from formibar.core.errors import InvalidTimelineError, MalformedValueError, UnsupportedObjectError
from formibar.core.graphs import Digraph, Graph
from formibar.core.intervals import Interval
from formibar.core.partitions import SubPartition, refines
from formibar.utils.utils import INF

logger = logging.getLogger(__name__)

V = TypeVar("V")
W = TypeVar("W")


@dataclass(frozen=True)
class Piece(Generic[V]):
    support: Interval
    value: V
    kind: str  # "tail", "crit" or "gap"


@dataclass(frozen=True)
class Timeline(Generic[V]):
    """A piecewise-constant map from the real line into values of type V.

    Values are stored at each critical time, on each open gap between consecutive
    critical times, and on the two unbounded tails.
    """

    universe: FrozenSet[str]
    crit: Tuple[Fraction, ...]
    at_crit: Tuple[V, ...]
    on_gap: Tuple[V, ...]
    left_tail: V
    right_tail: V
    meta: Tuple[Tuple[str, str], ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "universe", frozenset(self.universe))
        object.__setattr__(self, "crit", tuple(Fraction(c) for c in self.crit))
        object.__setattr__(self, "at_crit", tuple(self.at_crit))
        object.__setattr__(self, "on_gap", tuple(self.on_gap))
        n = len(self.crit)
        if any(a >= b for a, b in zip(self.crit, self.crit[1:])):
            raise MalformedValueError("critical times must be strictly increasing")
        if len(self.at_crit) != n:
            raise MalformedValueError(f"expected {n} critical values, got {len(self.at_crit)}")
        if len(self.on_gap) != max(n - 1, 0):
            raise MalformedValueError(f"expected {max(n - 1, 0)} gap values, got {len(self.on_gap)}")
        if n == 0 and self.left_tail != self.right_tail:
            raise MalformedValueError("a timeline without critical times must have equal tails")

    @classmethod
    def constant(cls, universe: Iterable[str], value: V) -> "Timeline[V]":
        return cls(frozenset(universe), (), (), (), value, value)

    def value_at(self, t: Fraction) -> V:
        crit = self.crit
        if not crit or t < crit[0]:
            return self.left_tail
        if t > crit[-1]:
            return self.right_tail
        lo, hi = 0, len(crit) - 1
        while lo <= hi:
            mid = (lo + hi) // 2
            if crit[mid] == t:
                return self.at_crit[mid]
            if crit[mid] < t:
                lo = mid + 1
            else:
                hi = mid - 1
        return self.on_gap[hi]

    def levels(self) -> List[V]:
        """Values in zigzag order: left tail, c1, gap1, c2, ..., cn, right tail."""
        if not self.crit:
            return [self.left_tail]
        out: List[V] = [self.left_tail]
        for i, value in enumerate(self.at_crit):
            out.append(value)
            if i < len(self.on_gap):
                out.append(self.on_gap[i])
        out.append(self.right_tail)
        return out

    def pieces(self) -> Iterator[Piece[V]]:
        crit = self.crit
        if not crit:
            yield Piece(Interval.real_line(), self.left_tail, "tail")
            return
        yield Piece(Interval.open(-INF, crit[0]), self.left_tail, "tail")
        for i, c in enumerate(crit):
            yield Piece(Interval.point(c), self.at_crit[i], "crit")
            if i < len(self.on_gap):
                yield Piece(Interval.open(c, crit[i + 1]), self.on_gap[i], "gap")
        yield Piece(Interval.open(crit[-1], INF), self.right_tail, "tail")

    def restrict_to(self, window: Interval) -> List[Piece[V]]:
        """Pieces whose support meets the window."""
        out = []
        for piece in self.pieces():
            support = piece.support
            if support.is_point:
                if window.contains(support.left):
                    out.append(piece)
            elif window.meets_open(support.left, support.right):
                out.append(piece)
        return out

    def values_meeting(self, window: Interval) -> List[V]:
        return [piece.value for piece in self.restrict_to(window)]

    def sample_points(self) -> List[Fraction]:
        return sample_points(self.crit)

    def map(self, fn: Callable[[V], W]) -> "Timeline[W]":
        return Timeline(
            self.universe,
            self.crit,
            tuple(fn(v) for v in self.at_crit),
            tuple(fn(v) for v in self.on_gap),
            fn(self.left_tail),
            fn(self.right_tail),
            self.meta,
        )

    def pruned(self) -> "Timeline[V]":
        """Drop critical times where the value equals both neighbouring values."""
        levels = self.levels()
        keep = []
        for i, c in enumerate(self.crit):
            before, here, after = levels[2 * i], levels[2 * i + 1], levels[2 * i + 2]
            if not (before == here == after):
                keep.append(i)
        if len(keep) == len(self.crit):
            return self
        crit = tuple(self.crit[i] for i in keep)
        at_crit = tuple(self.at_crit[i] for i in keep)
        on_gap = tuple(self.value_at((a + b) / 2) for a, b in zip(crit, crit[1:]))
        return Timeline(self.universe, crit, at_crit, on_gap, self.left_tail, self.right_tail, self.meta)

    def refine(self, times: Iterable[Fraction]) -> "Timeline[V]":
        """Insert extra (non-critical) times without changing the function."""
        grid = sorted(set(self.crit) | {Fraction(t) for t in times})
        return Timeline(
            self.universe,
            tuple(grid),
            tuple(self.value_at(c) for c in grid),
            tuple(self.value_at((a + b) / 2) for a, b in zip(grid, grid[1:])),
            self.left_tail,
            self.right_tail,
            self.meta,
        )

    def with_meta(self, **items: str) -> "Timeline[V]":
        merged = dict(self.meta)
        merged.update(items)
        return Timeline(
            self.universe, self.crit, self.at_crit, self.on_gap, self.left_tail, self.right_tail,
            tuple(sorted(merged.items())),
        )


DynamicGraph = Timeline[Graph]
DynamicDigraph = Timeline[Digraph]
Formigram = Timeline[SubPartition]


def sample_points(crit: Sequence[Fraction]) -> List[Fraction]:
    """One time per piece of a timeline with these critical times, in order."""
    crit = sorted(crit)
    if not crit:
        return [Fraction(0)]
    points = [crit[0] - 1]
    for i, c in enumerate(crit):
        points.append(c)
        if i + 1 < len(crit):
            points.append((c + crit[i + 1]) / 2)
    points.append(crit[-1] + 1)
    return points


def merged_sample_points(*timelines: Timeline) -> List[Fraction]:
    grid = set()
    for timeline in timelines:
        grid.update(timeline.crit)
    return sample_points(sorted(grid))


def from_sampler(
    universe: Iterable[str],
    events: Iterable[Fraction],
    sampler: Callable[[Fraction], V],
    prune: bool = True,
) -> Timeline[V]:
    """Build a timeline whose value can only change at the given event times."""
    grid = sorted(set(Fraction(e) for e in events))
    if not grid:
        value = sampler(Fraction(0))
        return Timeline.constant(universe, value)
    timeline = Timeline(
        frozenset(universe),
        tuple(grid),
        tuple(sampler(c) for c in grid),
        tuple(sampler((a + b) / 2) for a, b in zip(grid, grid[1:])),
        sampler(grid[0] - 1),
        sampler(grid[-1] + 1),
    )
    return timeline.pruned() if prune else timeline


def from_pieces(
    universe: Iterable[str],
    pieces: Sequence[Tuple[Interval, V]],
    default: V,
) -> Timeline[V]:
    """Build a timeline from disjoint (support, value) pairs; elsewhere the value is default."""
    events = set()
    for support, _ in pieces:
        for end in (support.left, support.right):
            if end not in (INF, -INF):
                events.add(end)

    def sampler(t: Fraction) -> V:
        for support, value in pieces:
            if support.contains(t):
                return value
        return default

    return from_sampler(universe, events, sampler)


@dataclass(frozen=True)
class Violation:
    code: str  # "universe", "self-loop", "comparability" or "lifespan"
    where: str
    message: str
    element: Optional[str] = None

    def __str__(self) -> str:
        subject = f" [{self.element}]" if self.element is not None else ""
        return f"{self.code} at {self.where}{subject}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    kind: str
    violations: Tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def codes(self) -> List[str]:
        return sorted({v.code for v in self.violations})

    def __str__(self) -> str:
        if self.ok:
            return f"valid {self.kind}"
        return "\n".join([f"invalid {self.kind}:"] + [f"  - {v}" for v in self.violations])


def _piece_label(piece: Piece) -> str:
    return str(piece.support)


def _kind_of(timeline: Timeline) -> str:
    sample = timeline.left_tail
    if isinstance(sample, Graph):
        return "dg"
    if isinstance(sample, Digraph):
        return "ddg"
    if isinstance(sample, SubPartition):
        return "formigram"
    raise UnsupportedObjectError(f"cannot validate a timeline of {type(sample).__name__}")


def _members(value: Union[Graph, Digraph, SubPartition]) -> FrozenSet[str]:
    if isinstance(value, SubPartition):
        return value.underlying
    return value.vertices


def _below(kind: str, lower, upper) -> bool:
    if kind == "formigram":
        return lower.universe == upper.universe and refines(lower, upper)
    return lower.is_subgraph_of(upper)


def validate(timeline: Timeline) -> ValidationReport:
    """Collect every violated invariant of a DG, DDG or formigram."""
    kind = _kind_of(timeline)
    violations: List[Violation] = []
    pieces = list(timeline.pieces())

    for piece in pieces:
        value = piece.value
        where = _piece_label(piece)
        if kind == "formigram" and value.universe != timeline.universe:
            violations.append(Violation("universe", where, "sub-partition universe differs from the timeline's"))
        outside = sorted(_members(value) - timeline.universe)
        for x in outside:
            violations.append(Violation("universe", where, "element outside the universe", x))
        if kind in ("dg", "ddg"):
            for x in value.missing_loops():
                violations.append(Violation("self-loop", where, "vertex without its self-loop", x))

    # comparability: every open piece sits below its neighbouring critical values
    for i, piece in enumerate(pieces):
        if piece.kind == "crit":
            continue
        for j in (i - 1, i + 1):
            if 0 <= j < len(pieces) and pieces[j].kind == "crit":
                if not _below(kind, piece.value, pieces[j].value):
                    violations.append(
                        Violation(
                            "comparability",
                            f"{_piece_label(piece)} vs {_piece_label(pieces[j])}",
                            "open-piece value is not below the adjacent critical value",
                        )
                    )

    for x in sorted(timeline.universe):
        present = [x in _members(p.value) for p in pieces]
        runs = []
        for i, flag in enumerate(present):
            if flag and (i == 0 or not present[i - 1]):
                runs.append([i, i])
            elif flag:
                runs[-1][1] = i
        if not runs:
            violations.append(Violation("lifespan", "everywhere", "element is never present", x))
            continue
        if len(runs) > 1:
            spans = ", ".join(f"{_piece_label(pieces[a])}..{_piece_label(pieces[b])}" for a, b in runs)
            violations.append(Violation("lifespan", spans, "lifespan is not a single interval", x))
            continue
        start, end = runs[0]
        open_start = pieces[start].kind == "gap" or (pieces[start].kind == "tail" and start != 0)
        open_end = pieces[end].kind == "gap" or (pieces[end].kind == "tail" and end != len(pieces) - 1)
        if open_start or open_end:
            violations.append(
                Violation(
                    "lifespan",
                    f"{_piece_label(pieces[start])}..{_piece_label(pieces[end])}",
                    "lifespan is not closed",
                    x,
                )
            )

    report = ValidationReport(kind, tuple(violations))
    if not report.ok:
        logger.debug("validation found %d violation(s) in %s", len(violations), kind)
    return report


def require_valid(timeline: Timeline) -> ValidationReport:
    report = validate(timeline)
    if not report.ok:
        raise InvalidTimelineError(str(report), report)
    return report

