from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Tuple

import networkx as nx

from formibar.core.errors import InvalidWindowError, MalformedValueError
from formibar.core.intervals import Barcode
from formibar.core.partitions import Block, SubPartition
from formibar.core.timeline import Formigram
from formibar.zigzag.barcode import barcode_of_diagram
from formibar.zigzag.diagram import ZigzagSetDiagram

logger = logging.getLogger(__name__)


def _label_key(label: Block) -> Tuple[str, ...]:
    return tuple(sorted(label))


@dataclass(frozen=True, order=True)
class ReebVertex:
    time: Fraction
    label: Tuple[str, ...]

    @property
    def block(self) -> Block:
        return frozenset(self.label)


@dataclass(frozen=True, order=True)
class ReebEdge:
    source: ReebVertex
    target: ReebVertex
    label: Tuple[str, ...]

    @property
    def span(self) -> Tuple[Fraction, Fraction]:
        return self.source.time, self.target.time


@dataclass(frozen=True)
class ReebGraph:
    """Labeled R-graph: vertices over critical times (and window ends), edges over the open pieces."""

    start: Fraction
    end: Fraction
    vertices: Tuple[ReebVertex, ...]
    edges: Tuple[ReebEdge, ...]
    source_crit: Tuple[Fraction, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(sorted(set(self.vertices))))
        object.__setattr__(self, "edges", tuple(sorted(self.edges)))
        known = set(self.vertices)
        for e in self.edges:
            if e.source not in known or e.target not in known:
                raise MalformedValueError(f"edge {e.label} attaches to a missing vertex")
            if not set(e.label) <= set(e.source.label) or not set(e.label) <= set(e.target.label):
                raise MalformedValueError(f"edge label {e.label} is not inside both endpoint labels")

    def times(self) -> List[Fraction]:
        return sorted({v.time for v in self.vertices} | {self.start, self.end})

    def vertices_at(self, t: Fraction) -> List[ReebVertex]:
        return [v for v in self.vertices if v.time == t]

    def edges_over(self, left: Fraction, right: Fraction) -> List[ReebEdge]:
        return [e for e in self.edges if e.span == (left, right)]

    def to_networkx(self) -> nx.MultiGraph:
        graph = nx.MultiGraph()
        for v in self.vertices:
            graph.add_node(v, time=v.time, label=v.label)
        for e in self.edges:
            graph.add_edge(e.source, e.target, label=e.label)
        return graph


def reeb_of_formigram(formigram: Formigram, start: Fraction, end: Fraction) -> ReebGraph:
    start, end = Fraction(start), Fraction(end)
    if start > end:
        raise InvalidWindowError(f"window start {start} exceeds its end {end}")
    times = sorted({start, end} | {c for c in formigram.crit if start < c < end})
    vertices: List[ReebVertex] = []
    for t in times:
        vertices.extend(ReebVertex(t, _label_key(b)) for b in formigram.value_at(t).blocks)
    edges: List[ReebEdge] = []
    for left, right in zip(times, times[1:]):
        left_value, right_value = formigram.value_at(left).block_index(), formigram.value_at(right).block_index()
        for block in formigram.value_at((left + right) / 2).blocks:
            anchor = next(iter(block))
            edges.append(
                ReebEdge(
                    ReebVertex(left, _label_key(left_value[anchor])),
                    ReebVertex(right, _label_key(right_value[anchor])),
                    _label_key(block),
                )
            )
    reeb = ReebGraph(start, end, tuple(vertices), tuple(edges), formigram.crit)
    logger.debug("Reeb graph over [%s,%s]: %d vertices, %d edges", start, end, len(reeb.vertices), len(reeb.edges))
    return reeb


def glue(left: ReebGraph, right: ReebGraph) -> ReebGraph:
    """Concatenate Reeb graphs over adjacent windows [a,m] and [m,b]."""
    if left.end != right.start:
        raise InvalidWindowError(f"windows [{left.start},{left.end}] and [{right.start},{right.end}] do not meet")
    if set(left.vertices_at(left.end)) != set(right.vertices_at(right.start)):
        raise MalformedValueError("the two graphs disagree at the gluing time")
    return ReebGraph(
        left.start,
        right.end,
        left.vertices + right.vertices,
        left.edges + right.edges,
        tuple(sorted(set(left.source_crit) | set(right.source_crit))),
    )


def betti_1(reeb: ReebGraph) -> int:
    graph = reeb.to_networkx()
    return graph.number_of_edges() - graph.number_of_nodes() + nx.number_connected_components(graph)


def levelset_barcode0(reeb: ReebGraph, left_tail: SubPartition, right_tail: SubPartition) -> Barcode:
    """0-th levelset zigzag barcode of the Reeb graph's height function.

    Levels are the tails, the vertex labels at each vertex time and the edge labels over each
    open piece; arrows are the attaching maps.
    """
    crit = reeb.source_crit
    if crit and (reeb.start > crit[0] or reeb.end < crit[-1]):
        raise InvalidWindowError(
            f"window [{reeb.start},{reeb.end}] does not cover the critical times {crit[0]}..{crit[-1]}"
        )
    times = reeb.times()
    levels: List[Tuple[Block, ...]] = [tuple(sorted(left_tail.blocks, key=_label_key))]
    for i, t in enumerate(times):
        levels.append(tuple(v.block for v in reeb.vertices_at(t)))
        if i + 1 < len(times):
            levels.append(tuple(frozenset(e.label) for e in reeb.edges_over(t, times[i + 1])))
    levels.append(tuple(sorted(right_tail.blocks, key=_label_key)))

    maps = []
    for k in range(len(levels) - 1):
        source, target = ZigzagSetDiagram.arrow_ends(k)
        position: Dict[str, int] = {x: j for j, block in enumerate(levels[target]) for x in block}
        maps.append(tuple(position[next(iter(block))] for block in levels[source]))
    diagram = ZigzagSetDiagram(tuple(levels), tuple(maps), tuple(times))
    return barcode_of_diagram(diagram)


def reeb_levelset_barcode(formigram: Formigram, start: Fraction, end: Fraction) -> Barcode:
    return levelset_barcode0(reeb_of_formigram(formigram, start, end), formigram.left_tail, formigram.right_tail)
