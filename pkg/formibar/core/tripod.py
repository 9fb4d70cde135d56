from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple

from formibar.core.errors import MalformedValueError, SizeBoundExceededError

logger = logging.getLogger(__name__)

Pair = Tuple[str, str]


@dataclass(frozen=True)
class Tripod:
    """A correspondence R between X and Y: both projections are onto."""

    x_universe: FrozenSet[str]
    y_universe: FrozenSet[str]
    pairs: FrozenSet[Pair]

    def __post_init__(self):
        object.__setattr__(self, "x_universe", frozenset(self.x_universe))
        object.__setattr__(self, "y_universe", frozenset(self.y_universe))
        object.__setattr__(self, "pairs", frozenset(tuple(p) for p in self.pairs))
        xs = {x for x, _ in self.pairs}
        ys = {y for _, y in self.pairs}
        if xs != self.x_universe:
            raise MalformedValueError(f"projection to X misses {sorted(self.x_universe - xs)}")
        if ys != self.y_universe:
            raise MalformedValueError(f"projection to Y misses {sorted(self.y_universe - ys)}")

    @classmethod
    def of(cls, pairs: Iterable[Pair]) -> "Tripod":
        pairs = frozenset(tuple(p) for p in pairs)
        return cls(frozenset(x for x, _ in pairs), frozenset(y for _, y in pairs), pairs)

    @classmethod
    def identity(cls, universe: Iterable[str]) -> "Tripod":
        universe = frozenset(universe)
        return cls(universe, universe, frozenset((x, x) for x in universe))

    def forward(self) -> Dict[str, FrozenSet[str]]:
        out: Dict[str, set] = {x: set() for x in self.x_universe}
        for x, y in self.pairs:
            out[x].add(y)
        return {x: frozenset(ys) for x, ys in out.items()}

    def backward(self) -> Dict[str, FrozenSet[str]]:
        out: Dict[str, set] = {y: set() for y in self.y_universe}
        for x, y in self.pairs:
            out[y].add(x)
        return {y: frozenset(xs) for y, xs in out.items()}

    def inverse(self) -> "Tripod":
        return Tripod(self.y_universe, self.x_universe, frozenset((y, x) for x, y in self.pairs))

    def is_minimal(self) -> bool:
        """No proper sub-relation is still a correspondence."""
        fwd, bwd = self.forward(), self.backward()
        return all(len(fwd[x]) == 1 or len(bwd[y]) == 1 for x, y in self.pairs)

    def sorted_pairs(self) -> List[Pair]:
        return sorted(self.pairs)


def check_size(
    x_universe: Iterable[str],
    y_universe: Iterable[str],
    bound: int,
    label: Optional[str] = None,
) -> None:
    nx_, ny_ = len(frozenset(x_universe)), len(frozenset(y_universe))
    if nx_ * ny_ > bound:
        raise SizeBoundExceededError(
            f"|X|*|Y| = {nx_}*{ny_} exceeds the exact-search bound {bound}"
            + (f" for {label}" if label else ""),
            sizes=(nx_, ny_),
            pair=label,
        )


def _nonempty_subsets(items: List[str]) -> List[Tuple[str, ...]]:
    return [c for k in range(1, len(items) + 1) for c in itertools.combinations(items, k)]


def correspondences(x_universe: Iterable[str], y_universe: Iterable[str]) -> Iterator[Tripod]:
    """Every correspondence between X and Y, in a deterministic order.

    Each x picks a nonempty set of partners; choices that leave some y uncovered are dropped.
    """
    xs, ys = sorted(frozenset(x_universe)), sorted(frozenset(y_universe))
    if not xs and not ys:
        yield Tripod(frozenset(), frozenset(), frozenset())
        return
    if not xs or not ys:
        return
    full_x, full_y = frozenset(xs), frozenset(ys)
    options = _nonempty_subsets(ys)
    for choice in itertools.product(options, repeat=len(xs)):
        if frozenset().union(*choice) == full_y:
            yield Tripod(full_x, full_y, frozenset((x, y) for x, partners in zip(xs, choice) for y in partners))


def _star_forests(free_x: List[str], free_y: List[str]) -> Iterator[List[Pair]]:
    # the first free x is either the centre of a star over some ys, or a leaf of a star
    # centred at one y that holds at least one other x
    if not free_x:
        if not free_y:
            yield []
        return
    if not free_y:
        return
    x, rest_x = free_x[0], free_x[1:]
    for leaves in _nonempty_subsets(free_y):
        star = [(x, y) for y in leaves]
        rest_y = [y for y in free_y if y not in leaves]
        for forest in _star_forests(rest_x, rest_y):
            yield star + forest
    for y in free_y:
        rest_y = [v for v in free_y if v != y]
        for others in _nonempty_subsets(rest_x):
            star = [(x, y)] + [(u, y) for u in others]
            for forest in _star_forests([u for u in rest_x if u not in others], rest_y):
                yield star + forest


def minimal_correspondences(x_universe: Iterable[str], y_universe: Iterable[str]) -> List[Tripod]:
    """Correspondences from which no pair can be dropped.

    These are exactly the spanning star forests of X x Y in which every star has a point on
    each side, so they are built directly rather than filtered out of all correspondences.
    Interleaving feasibility only gets easier when pairs are removed, so the optimum over
    all correspondences is attained on one of these.
    """
    xs, ys = sorted(frozenset(x_universe)), sorted(frozenset(y_universe))
    if not xs and not ys:
        return [Tripod(frozenset(), frozenset(), frozenset())]
    found = sorted(
        (Tripod(frozenset(xs), frozenset(ys), frozenset(forest)) for forest in _star_forests(xs, ys)),
        key=Tripod.sorted_pairs,
    )
    logger.debug("%d minimal correspondence(s) for |X|=%d, |Y|=%d", len(found), len(xs), len(ys))
    return found
