from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Hashable, Iterable, List, Mapping, Sequence, Tuple

from formibar.core.errors import InvalidParameterError, MalformedValueError, RefinementError, UniverseMismatchError

Block = FrozenSet[str]


class UnionFind:
    """Disjoint sets with path compression and union by size.

    Representatives are canonicalized to the minimum element id when blocks are read
    out, so results do not depend on union order.
    """

    def __init__(self, elements: Iterable[Hashable] = ()):
        self.parent: Dict[Hashable, Hashable] = {}
        self.size: Dict[Hashable, int] = {}
        for element in elements:
            self.add(element)

    def add(self, element: Hashable) -> None:
        if element not in self.parent:
            self.parent[element] = element
            self.size[element] = 1

    def __contains__(self, element: Hashable) -> bool:
        return element in self.parent

    def find(self, element: Hashable) -> Hashable:
        root = element
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[element] != root:
            self.parent[element], element = root, self.parent[element]
        return root

    def union(self, a: Hashable, b: Hashable) -> Hashable:
        self.add(a)
        self.add(b)
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return ra

    def connected(self, a: Hashable, b: Hashable) -> bool:
        return self.find(a) == self.find(b)

    def to_sets(self) -> List[FrozenSet]:
        groups: Dict[Hashable, set] = {}
        for element in self.parent:
            groups.setdefault(self.find(element), set()).add(element)
        return sorted((frozenset(g) for g in groups.values()), key=lambda g: min(g))


@dataclass(frozen=True)
class SubPartition:
    """A partition of a subset (the underlying set) of a finite universe."""

    universe: FrozenSet[str]
    blocks: FrozenSet[Block] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "universe", frozenset(self.universe))
        object.__setattr__(self, "blocks", frozenset(frozenset(b) for b in self.blocks))
        seen: set = set()
        for block in self.blocks:
            if not block:
                raise MalformedValueError("sub-partition blocks must be nonempty")
            if seen & block:
                raise MalformedValueError(f"blocks overlap on {sorted(seen & block)}")
            seen |= block
        if not seen <= self.universe:
            raise MalformedValueError(f"elements {sorted(seen - self.universe)} are outside the universe")

    @classmethod
    def of(cls, universe: Iterable[str], blocks: Iterable[Iterable[str]] = ()) -> "SubPartition":
        return cls(frozenset(universe), frozenset(frozenset(b) for b in blocks))

    @classmethod
    def empty(cls, universe: Iterable[str]) -> "SubPartition":
        return cls(frozenset(universe), frozenset())

    @property
    def underlying(self) -> FrozenSet[str]:
        return frozenset().union(*self.blocks) if self.blocks else frozenset()

    @property
    def is_full(self) -> bool:
        return self.underlying == self.universe

    def __len__(self) -> int:
        return len(self.blocks)

    def sorted_blocks(self) -> List[Tuple[str, ...]]:
        return sorted(tuple(sorted(b)) for b in self.blocks)

    def block_index(self) -> Dict[str, Block]:
        return {x: block for block in self.blocks for x in block}

    def __repr__(self) -> str:
        inner = ", ".join("{" + ",".join(b) + "}" for b in self.sorted_blocks())
        return f"SubPartition({{{inner}}})"


def _check_universe(partitions: Sequence[SubPartition]) -> None:
    universes = {p.universe for p in partitions}
    if len(universes) > 1:
        raise UniverseMismatchError("sub-partitions are over different universes")


def refines(p: SubPartition, q: SubPartition) -> bool:
    """True iff every block of p is contained in some block of q."""
    _check_universe([p, q])
    index = q.block_index()
    for block in p.blocks:
        anchor = next(iter(block))
        target = index.get(anchor)
        if target is None or not block <= target:
            return False
    return True


def finest_common_coarsening(partitions: Sequence[SubPartition]) -> SubPartition:
    """The join of a family: transitive closure of the block-induced equivalence."""
    partitions = list(partitions)
    if not partitions:
        raise InvalidParameterError("finest common coarsening of an empty family is undefined")
    _check_universe(partitions)
    uf = UnionFind()
    for p in partitions:
        for block in p.blocks:
            members = sorted(block)
            uf.add(members[0])
            for other in members[1:]:
                uf.union(members[0], other)
    return SubPartition(partitions[0].universe, frozenset(uf.to_sets()))


def canonical_map(p: SubPartition, q: SubPartition) -> Dict[Block, Block]:
    if not refines(p, q):
        raise RefinementError(f"{p!r} does not refine {q!r}")
    index = q.block_index()
    return {block: index[next(iter(block))] for block in p.blocks}


def is_partition_morphism(p: SubPartition, q: SubPartition, relation: Mapping[str, Iterable[str]]) -> bool:
    """Multivalued partition morphism test.

    For every block of p, all partners (under relation) of its elements must lie in a
    single block of q. This includes the requirement that partners are in q's underlying set.
    """
    index = q.block_index()
    for block in p.blocks:
        target = None
        for x in block:
            for y in relation.get(x, ()):
                image = index.get(y)
                if image is None:
                    return False
                if target is None:
                    target = image
                elif image is not target and image != target:
                    return False
    return True
