from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Mapping, Tuple

from formibar.core.errors import MalformedValueError, NotUltrametricError


@dataclass(frozen=True)
class MetricSpace:
    """Finite (pseudo-)metric space; distances keyed by unordered pairs of distinct points."""

    points: Tuple[str, ...]
    dist: Mapping[FrozenSet[str], Fraction]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(sorted(set(self.points))))
        object.__setattr__(self, "dist", {frozenset(k): Fraction(v) for k, v in self.dist.items()})
        for x, y in itertools.combinations(self.points, 2):
            value = self.dist.get(frozenset((x, y)))
            if value is None:
                raise MalformedValueError(f"missing distance between {x} and {y}")
            if value < 0:
                raise MalformedValueError(f"negative distance between {x} and {y}")

    def __hash__(self):
        return hash((self.points, tuple(sorted((tuple(sorted(k)), v) for k, v in self.dist.items()))))

    @classmethod
    def of(cls, points: Iterable[str], distances: Mapping[Tuple[str, str], object]) -> "MetricSpace":
        return cls(tuple(points), {frozenset(pair): Fraction(v) for pair, v in distances.items()})

    @classmethod
    def point(cls, name: str = "p") -> "MetricSpace":
        return cls((name,), {})

    def __len__(self) -> int:
        return len(self.points)

    def d(self, x: str, y: str) -> Fraction:
        if x == y:
            return Fraction(0)
        return self.dist[frozenset((x, y))]

    def pairs(self) -> List[Tuple[str, str]]:
        return list(itertools.combinations(self.points, 2))

    def diameter(self) -> Fraction:
        return max((self.d(x, y) for x, y in self.pairs()), default=Fraction(0))

    def as_dict(self) -> Dict[Tuple[str, str], Fraction]:
        return {(x, y): self.d(x, y) for x, y in self.pairs()}

    def is_metric(self) -> bool:
        return all(self.d(x, z) <= self.d(x, y) + self.d(y, z) for x, y, z in itertools.permutations(self.points, 3))

    def is_ultrametric(self) -> bool:
        return all(
            self.d(x, z) <= max(self.d(x, y), self.d(y, z)) for x, y, z in itertools.permutations(self.points, 3)
        )

    def require_ultrametric(self, positive: bool = True) -> None:
        for x, y, z in itertools.permutations(self.points, 3):
            if self.d(x, z) > max(self.d(x, y), self.d(y, z)):
                raise NotUltrametricError(f"strong triangle inequality fails for ({x},{y},{z})")
        if positive:
            for x, y in self.pairs():
                if self.d(x, y) <= 0:
                    raise NotUltrametricError(f"points {x} and {y} are at distance {self.d(x, y)}")
