from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from formibar.core.errors import MalformedValueError
from formibar.core.partitions import Block, SubPartition, canonical_map
from formibar.core.timeline import Formigram, require_valid


@dataclass(frozen=True)
class ZZInterval:
    """A contiguous range lo..hi of level indices (both inclusive)."""

    lo: int
    hi: int

    def __post_init__(self):
        if self.lo < 0 or self.hi < self.lo:
            raise MalformedValueError(f"bad index range {self.lo}..{self.hi}")

    def __str__(self) -> str:
        return f"[{self.lo},{self.hi}]"


@dataclass(frozen=True)
class ZigzagSetDiagram:
    """A zigzag of finite sets S_0 -> S_1 <- S_2 -> S_3 <- ... S_{2n}.

    Arrows always leave the even levels. ``maps[k]`` is the arrow between levels k and k+1,
    given as a tuple sending each element index of the even level to an index in the odd one.
    ``times[i]`` is the real time of odd level 2i+1; even levels sit on the open pieces
    between (and beyond) them.
    """

    levels: Tuple[Tuple[Block, ...], ...]
    maps: Tuple[Tuple[int, ...], ...]
    times: Tuple[Fraction, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(tuple(level) for level in self.levels))
        object.__setattr__(self, "maps", tuple(tuple(m) for m in self.maps))
        object.__setattr__(self, "times", tuple(Fraction(t) for t in self.times))
        if len(self.levels) % 2 != 1:
            raise MalformedValueError("a zigzag set diagram has an odd number of levels")
        if len(self.maps) != len(self.levels) - 1:
            raise MalformedValueError("one map per pair of adjacent levels")
        if self.times and len(self.times) != len(self.levels) // 2:
            raise MalformedValueError("one time per odd level")
        for k, arrow in enumerate(self.maps):
            source, target = self.arrow_ends(k)
            if len(arrow) != len(self.levels[source]):
                raise MalformedValueError(f"map {k} is not total on level {source}")
            if any(not 0 <= j < len(self.levels[target]) for j in arrow):
                raise MalformedValueError(f"map {k} leaves level {target}")

    @staticmethod
    def arrow_ends(k: int) -> Tuple[int, int]:
        """(source, target) level indices of arrow k."""
        return (k, k + 1) if k % 2 == 0 else (k + 1, k)

    @property
    def length(self) -> int:
        return len(self.levels)

    def dims(self) -> List[int]:
        return [len(level) for level in self.levels]


def _sorted_blocks(p: SubPartition) -> Tuple[Block, ...]:
    return tuple(sorted(p.blocks, key=lambda b: tuple(sorted(b))))


def diagram_from_levels(values: Sequence[SubPartition], times: Sequence[Fraction] = ()) -> ZigzagSetDiagram:
    """Zigzag of block sets with canonical maps, from sub-partitions in level order."""
    levels = [_sorted_blocks(v) for v in values]
    maps = []
    for k in range(len(values) - 1):
        source, target = ZigzagSetDiagram.arrow_ends(k)
        blocks = canonical_map(values[source], values[target])
        position = {block: i for i, block in enumerate(levels[target])}
        maps.append(tuple(position[blocks[b]] for b in levels[source]))
    return ZigzagSetDiagram(tuple(levels), tuple(maps), tuple(times))


def formigram_to_diagram(formigram: Formigram) -> ZigzagSetDiagram:
    require_valid(formigram)
    return diagram_from_levels(formigram.levels(), formigram.crit)


def random_diagram(rng: random.Random, levels: int, max_size: int = 4) -> ZigzagSetDiagram:
    """A zigzag of random finite sets and random (not necessarily formigram) maps."""
    if levels % 2 == 0:
        levels += 1
    sizes = [rng.randint(0, max_size) for _ in range(levels)]
    # odd levels receive maps, so they cannot be empty when the even neighbour is not
    for k in range(1, levels, 2):
        if sizes[k] == 0 and (sizes[k - 1] or sizes[k + 1]):
            sizes[k] = 1
    names = [tuple(frozenset({f"l{i}e{j}"}) for j in range(size)) for i, size in enumerate(sizes)]
    maps = []
    for k in range(levels - 1):
        source, target = ZigzagSetDiagram.arrow_ends(k)
        maps.append(tuple(rng.randrange(sizes[target]) for _ in range(sizes[source])))
    times = tuple(Fraction(i + 1) for i in range(levels // 2))
    return ZigzagSetDiagram(tuple(names), tuple(maps), times)
