from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, List, Tuple

from formibar.core.errors import EmptyIntervalError, MalformedValueError
from formibar.utils.utils import INF, ExtendedTime, format_time, is_finite


@dataclass(frozen=True)
class Interval:
    left: ExtendedTime
    right: ExtendedTime
    left_closed: bool = False
    right_closed: bool = False

    def __post_init__(self):
        for name in ("left", "right"):
            value = getattr(self, name)
            if isinstance(value, int) and not isinstance(value, bool):
                object.__setattr__(self, name, Fraction(value))
            elif isinstance(value, float) and not math.isinf(value):
                raise MalformedValueError("finite interval endpoints must be exact rationals")
        if self.left == INF or self.right == -INF:
            raise MalformedValueError("interval endpoints out of order")
        if not is_finite(self.left) and self.left_closed:
            raise MalformedValueError("an infinite endpoint is always open")
        if not is_finite(self.right) and self.right_closed:
            raise MalformedValueError("an infinite endpoint is always open")
        if self.left > self.right:
            raise EmptyIntervalError(f"left endpoint {self.left} exceeds right endpoint {self.right}")
        if self.left == self.right and not (self.left_closed and self.right_closed):
            raise EmptyIntervalError("a degenerate interval must be the closed point [a,a]")

    @classmethod
    def closed(cls, a: ExtendedTime, b: ExtendedTime) -> "Interval":
        return cls(a, b, is_finite(a), is_finite(b))

    @classmethod
    def open(cls, a: ExtendedTime, b: ExtendedTime) -> "Interval":
        return cls(a, b, False, False)

    @classmethod
    def point(cls, a: Fraction) -> "Interval":
        return cls(a, a, True, True)

    @classmethod
    def real_line(cls) -> "Interval":
        return cls(-INF, INF, False, False)

    @property
    def length(self) -> ExtendedTime:
        if not (is_finite(self.left) and is_finite(self.right)):
            return INF
        return self.right - self.left

    @property
    def is_point(self) -> bool:
        return self.left == self.right

    def sort_key(self) -> Tuple:
        return (self.left, self.left_closed, self.right, self.right_closed)

    def contains(self, t: Fraction) -> bool:
        if t < self.left or (t == self.left and not self.left_closed):
            return False
        if t > self.right or (t == self.right and not self.right_closed):
            return False
        return True

    def meets_open(self, p: ExtendedTime, q: ExtendedTime) -> bool:
        """Whether this interval intersects the open interval (p, q)."""
        lower = max(self.left, p)
        upper = min(self.right, q)
        if lower < upper:
            return True
        return self.is_point and p < self.left < q

    def contains_interval(self, other: "Interval") -> bool:
        if other.left < self.left or (other.left == self.left and other.left_closed and not self.left_closed):
            return False
        if other.right > self.right or (other.right == self.right and other.right_closed and not self.right_closed):
            return False
        return True

    def contains_segment(self, length: Fraction) -> bool:
        """Whether some closed segment [t, t + length] fits inside."""
        if self.length == INF:
            return True
        if self.left_closed and self.right_closed:
            return self.length >= length
        return self.length > length

    def shifted(self, left_by: Fraction, right_by: Fraction) -> "Interval":
        left = self.left + left_by if is_finite(self.left) else self.left
        right = self.right + right_by if is_finite(self.right) else self.right
        return Interval(left, right, self.left_closed, self.right_closed)

    def __str__(self) -> str:
        return (
            ("[" if self.left_closed else "(")
            + format_time(self.left)
            + ","
            + format_time(self.right)
            + ("]" if self.right_closed else ")")
        )


@dataclass(frozen=True)
class Barcode:
    """Multiset of intervals kept in canonical order."""

    intervals: Tuple[Interval, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "intervals", tuple(sorted(self.intervals, key=Interval.sort_key)))

    @classmethod
    def of(cls, intervals: Iterable[Interval]) -> "Barcode":
        return cls(tuple(intervals))

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    def count_containing(self, t: Fraction) -> int:
        return sum(1 for interval in self.intervals if interval.contains(t))

    def finite_endpoints(self) -> List[Fraction]:
        points = set()
        for interval in self.intervals:
            for value in (interval.left, interval.right):
                if is_finite(value):
                    points.add(value)
        return sorted(points)

    def __str__(self) -> str:
        return "{" + ", ".join(str(i) for i in self.intervals) + "}"
