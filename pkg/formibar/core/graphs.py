from __future__ import annotations

from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, List, Tuple

from formibar.core.errors import MalformedValueError

Edge = FrozenSet[str]
Arc = Tuple[str, str]


def edge(a: str, b: str) -> Edge:
    return frozenset((a, b))


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph; an edge is a 1- or 2-element frozenset (1 = self-loop)."""

    vertices: FrozenSet[str] = field(default_factory=frozenset)
    edges: FrozenSet[Edge] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "vertices", frozenset(self.vertices))
        object.__setattr__(self, "edges", frozenset(frozenset(e) for e in self.edges))
        for e in self.edges:
            if not 1 <= len(e) <= 2:
                raise MalformedValueError(f"malformed edge {sorted(e)}")
            if not e <= self.vertices:
                raise MalformedValueError(f"edge {sorted(e)} has an endpoint outside the vertex set")

    @classmethod
    def of(cls, vertices: Iterable[str], edges: Iterable[Iterable[str]] = (), loops: bool = False) -> "Graph":
        vertices = frozenset(vertices)
        edge_set = {frozenset(e) for e in edges}
        if loops:
            edge_set |= {frozenset((v,)) for v in vertices}
        return cls(vertices, frozenset(edge_set))

    def has_edge(self, a: str, b: str) -> bool:
        return frozenset((a, b)) in self.edges

    def union(self, other: "Graph") -> "Graph":
        return Graph(self.vertices | other.vertices, self.edges | other.edges)

    def is_subgraph_of(self, other: "Graph") -> bool:
        return self.vertices <= other.vertices and self.edges <= other.edges

    def missing_loops(self) -> List[str]:
        return sorted(v for v in self.vertices if frozenset((v,)) not in self.edges)

    def sorted_edges(self) -> List[Tuple[str, ...]]:
        return sorted(tuple(sorted(e)) for e in self.edges)


@dataclass(frozen=True)
class Digraph:
    vertices: FrozenSet[str] = field(default_factory=frozenset)
    arcs: FrozenSet[Arc] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "vertices", frozenset(self.vertices))
        object.__setattr__(self, "arcs", frozenset(tuple(a) for a in self.arcs))
        for a in self.arcs:
            if len(a) != 2 or a[0] not in self.vertices or a[1] not in self.vertices:
                raise MalformedValueError(f"arc {a} has an endpoint outside the vertex set")

    @classmethod
    def of(cls, vertices: Iterable[str], arcs: Iterable[Tuple[str, str]] = (), loops: bool = False) -> "Digraph":
        vertices = frozenset(vertices)
        arc_set = {tuple(a) for a in arcs}
        if loops:
            arc_set |= {(v, v) for v in vertices}
        return cls(vertices, frozenset(arc_set))

    def union(self, other: "Digraph") -> "Digraph":
        return Digraph(self.vertices | other.vertices, self.arcs | other.arcs)

    def is_subgraph_of(self, other: "Digraph") -> bool:
        return self.vertices <= other.vertices and self.arcs <= other.arcs

    def missing_loops(self) -> List[str]:
        return sorted(v for v in self.vertices if (v, v) not in self.arcs)

    def sorted_arcs(self) -> List[Arc]:
        return sorted(self.arcs)
