from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import ClassVar, Dict, List, Literal, Optional, Tuple, Type, Union

from pydantic import BaseModel, ValidationError

from formibar.core.errors import FormatError, UnsupportedObjectError
from formibar.core.graphs import Digraph, Graph
from formibar.core.intervals import Barcode, Interval
from formibar.core.partitions import SubPartition
from formibar.core.timeline import Timeline
from formibar.dms.dms import DMS, PiecewiseLinear, PiecewiseQuadratic
from formibar.reeb.reeb_graph import ReebEdge, ReebGraph, ReebVertex
from formibar.utils.utils import ExtendedTime, format_time, to_extended, to_fraction


def parse_time(text: Union[str, int]) -> Fraction:
    return to_fraction(text)


def parse_extended(text: Union[str, int]) -> ExtendedTime:
    return to_extended(text)


class SubPartitionDoc(BaseModel):
    # universe may be left out inside a formigram, where the timeline's universe applies
    universe: Optional[List[str]] = None
    blocks: List[List[str]] = []

    def to_core(self, universe=None) -> SubPartition:
        members = self.universe if self.universe is not None else universe
        if members is None:
            raise FormatError("a sub-partition needs a universe")
        return SubPartition.of(members, self.blocks)

    @classmethod
    def from_core(cls, p: SubPartition, with_universe: bool = False) -> "SubPartitionDoc":
        return cls(
            universe=sorted(p.universe) if with_universe else None,
            blocks=[list(b) for b in p.sorted_blocks()],
        )


class GraphDoc(BaseModel):
    vertices: List[str] = []
    edges: List[List[str]] = []

    def to_core(self, universe=None) -> Graph:
        return Graph.of(self.vertices, self.edges)

    @classmethod
    def from_core(cls, g: Graph, with_universe: bool = False) -> "GraphDoc":
        return cls(vertices=sorted(g.vertices), edges=[list(e) for e in g.sorted_edges()])


class DigraphDoc(BaseModel):
    vertices: List[str] = []
    arcs: List[Tuple[str, str]] = []

    def to_core(self, universe=None) -> Digraph:
        return Digraph.of(self.vertices, self.arcs)

    @classmethod
    def from_core(cls, g: Digraph, with_universe: bool = False) -> "DigraphDoc":
        return cls(vertices=sorted(g.vertices), arcs=g.sorted_arcs())


class TimelineDoc(BaseModel):
    """Piecewise-constant timeline: values at the critical times, on the gaps between them and
    on the two tails."""

    value_doc: ClassVar[Type[BaseModel]]

    kind: str
    universe: List[str]
    crit: List[str] = []
    meta: Dict[str, str] = {}

    def to_core(self) -> Timeline:
        universe = frozenset(self.universe)
        try:
            return Timeline(
                universe,
                tuple(parse_time(c) for c in self.crit),
                tuple(v.to_core(universe) for v in self.at_crit),
                tuple(v.to_core(universe) for v in self.on_gap),
                self.left_tail.to_core(universe),
                self.right_tail.to_core(universe),
                meta=tuple(sorted(self.meta.items())),
            )
        except ValueError as e:
            if isinstance(e, FormatError):
                raise
            raise FormatError(f"malformed {self.kind} document: {e}") from e

    @classmethod
    def from_core(cls, timeline: Timeline) -> "TimelineDoc":
        doc = cls.value_doc
        return cls(
            universe=sorted(timeline.universe),
            crit=[format_time(c) for c in timeline.crit],
            at_crit=[doc.from_core(v) for v in timeline.at_crit],
            on_gap=[doc.from_core(v) for v in timeline.on_gap],
            left_tail=doc.from_core(timeline.left_tail),
            right_tail=doc.from_core(timeline.right_tail),
            meta=dict(timeline.meta),
        )


class DynamicGraphDoc(TimelineDoc):
    value_doc: ClassVar[Type[BaseModel]] = GraphDoc

    kind: Literal["dg"] = "dg"
    at_crit: List[GraphDoc] = []
    on_gap: List[GraphDoc] = []
    left_tail: GraphDoc
    right_tail: GraphDoc


class DynamicDigraphDoc(TimelineDoc):
    value_doc: ClassVar[Type[BaseModel]] = DigraphDoc

    kind: Literal["ddg"] = "ddg"
    at_crit: List[DigraphDoc] = []
    on_gap: List[DigraphDoc] = []
    left_tail: DigraphDoc
    right_tail: DigraphDoc


class FormigramDoc(TimelineDoc):
    value_doc: ClassVar[Type[BaseModel]] = SubPartitionDoc

    kind: Literal["formigram"] = "formigram"
    at_crit: List[SubPartitionDoc] = []
    on_gap: List[SubPartitionDoc] = []
    left_tail: SubPartitionDoc
    right_tail: SubPartitionDoc


class IntervalDoc(BaseModel):
    left: str
    right: str
    left_closed: bool = False
    right_closed: bool = False

    def to_core(self) -> Interval:
        try:
            return Interval(parse_extended(self.left), parse_extended(self.right), self.left_closed, self.right_closed)
        except ValueError as e:
            if isinstance(e, FormatError):
                raise
            raise FormatError(f"malformed interval {self.left}..{self.right}: {e}") from e

    @classmethod
    def from_core(cls, interval: Interval) -> "IntervalDoc":
        return cls(
            left=format_time(interval.left),
            right=format_time(interval.right),
            left_closed=interval.left_closed,
            right_closed=interval.right_closed,
        )


class BarcodeDoc(BaseModel):
    kind: Literal["barcode"] = "barcode"
    bars: List[IntervalDoc] = []
    meta: Dict[str, str] = {}

    def to_core(self) -> Barcode:
        return Barcode.of(b.to_core() for b in self.bars)

    @classmethod
    def from_core(cls, barcode: Barcode, **meta: str) -> "BarcodeDoc":
        return cls(bars=[IntervalDoc.from_core(i) for i in barcode], meta=meta)


class PairDistanceDoc(BaseModel):
    x: str
    y: str
    form: Literal["linear", "quadratic"] = "linear"
    breakpoints: List[str]
    values: List[str] = []
    left_slope: str = "0"
    right_slope: str = "0"
    coefficients: List[Tuple[str, str, str]] = []

    def to_core(self) -> Union[PiecewiseLinear, PiecewiseQuadratic]:
        breakpoints = tuple(parse_time(b) for b in self.breakpoints)
        try:
            if self.form == "quadratic":
                return PiecewiseQuadratic(breakpoints, tuple(tuple(parse_time(v) for v in abc) for abc in self.coefficients))
            return PiecewiseLinear(
                breakpoints,
                tuple(parse_time(v) for v in self.values),
                parse_time(self.left_slope),
                parse_time(self.right_slope),
            )
        except ValueError as e:
            if isinstance(e, FormatError):
                raise
            raise FormatError(f"malformed distance for ({self.x}, {self.y}): {e}") from e

    @classmethod
    def from_core(cls, x: str, y: str, f: Union[PiecewiseLinear, PiecewiseQuadratic]) -> "PairDistanceDoc":
        breakpoints = [format_time(b) for b in f.breakpoints]
        if isinstance(f, PiecewiseQuadratic):
            return cls(
                x=x,
                y=y,
                form="quadratic",
                breakpoints=breakpoints,
                coefficients=[tuple(format_time(v) for v in abc) for abc in f.coefficients],
            )
        return cls(
            x=x,
            y=y,
            breakpoints=breakpoints,
            values=[format_time(v) for v in f.values],
            left_slope=format_time(f.left_slope),
            right_slope=format_time(f.right_slope),
        )


class DMSDoc(BaseModel):
    kind: Literal["dms"] = "dms"
    points: List[str]
    origin: Optional[str] = None
    distances: List[PairDistanceDoc] = []
    meta: Dict[str, str] = {}

    def to_core(self) -> DMS:
        dist = {}
        for pair in self.distances:
            if pair.x == pair.y:
                raise FormatError(f"distance of {pair.x} to itself is always 0")
            dist[frozenset((pair.x, pair.y))] = pair.to_core()
        origin = parse_time(self.origin) if self.origin is not None else None
        try:
            return DMS(tuple(self.points), dist, origin, meta=tuple(sorted(self.meta.items())))
        except ValueError as e:
            if isinstance(e, FormatError):
                raise
            raise FormatError(str(e)) from e

    @classmethod
    def from_core(cls, dms: DMS) -> "DMSDoc":
        return cls(
            points=list(dms.points),
            origin=format_time(dms.origin) if dms.origin is not None else None,
            distances=[PairDistanceDoc.from_core(x, y, dms.function(x, y)) for x, y in dms.pairs()],
            meta=dict(dms.meta),
        )


class ReebVertexDoc(BaseModel):
    time: str
    label: List[str]


class ReebEdgeDoc(BaseModel):
    source: int
    target: int
    label: List[str]


class ReebGraphDoc(BaseModel):
    kind: Literal["reeb"] = "reeb"
    start: str
    end: str
    vertices: List[ReebVertexDoc] = []
    edges: List[ReebEdgeDoc] = []

    def to_core(self) -> ReebGraph:
        vertices = [ReebVertex(parse_time(v.time), tuple(sorted(v.label))) for v in self.vertices]
        try:
            edges = [ReebEdge(vertices[e.source], vertices[e.target], tuple(sorted(e.label))) for e in self.edges]
            return ReebGraph(parse_time(self.start), parse_time(self.end), tuple(vertices), tuple(edges))
        except (IndexError, ValueError) as e:
            if isinstance(e, FormatError):
                raise
            raise FormatError(f"malformed Reeb graph: {e}") from e

    @classmethod
    def from_core(cls, reeb: ReebGraph) -> "ReebGraphDoc":
        index = {v: i for i, v in enumerate(reeb.vertices)}
        return cls(
            start=format_time(reeb.start),
            end=format_time(reeb.end),
            vertices=[ReebVertexDoc(time=format_time(v.time), label=list(v.label)) for v in reeb.vertices],
            edges=[ReebEdgeDoc(source=index[e.source], target=index[e.target], label=list(e.label)) for e in reeb.edges],
        )


DOCUMENTS: Dict[str, Type[BaseModel]] = {
    "dg": DynamicGraphDoc,
    "ddg": DynamicDigraphDoc,
    "formigram": FormigramDoc,
    "barcode": BarcodeDoc,
    "dms": DMSDoc,
    "reeb": ReebGraphDoc,
}


def document_kind(obj) -> str:
    if isinstance(obj, Timeline):
        sample = obj.left_tail
        if isinstance(sample, Graph):
            return "dg"
        if isinstance(sample, Digraph):
            return "ddg"
        if isinstance(sample, SubPartition):
            return "formigram"
    for kind, core in (("barcode", Barcode), ("dms", DMS), ("reeb", ReebGraph)):
        if isinstance(obj, core):
            return kind
    raise UnsupportedObjectError(f"no document type for {type(obj).__name__}")


def to_document(obj) -> BaseModel:
    return DOCUMENTS[document_kind(obj)].from_core(obj)


def dumps(obj) -> str:
    """Serialize a core value as a JSON document with a trailing newline."""
    return to_document(obj).model_dump_json(indent=2, exclude_none=True) + "\n"


def loads(text: str, kind: Optional[str] = None):
    """Parse a JSON document into its core value; kind defaults to the document's own "kind"."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise FormatError("a document is a JSON object")
    kind = kind or data.get("kind")
    if kind not in DOCUMENTS:
        raise FormatError(f"unknown document kind {kind!r}; expected one of {', '.join(DOCUMENTS)}")
    data.setdefault("kind", kind)
    if data["kind"] != kind:
        raise FormatError(f"document says kind {data['kind']!r} but {kind!r} was requested")
    try:
        doc = DOCUMENTS[kind].model_validate(data)
    except ValidationError as e:
        raise FormatError(f"malformed {kind} document:\n{e}") from e
    return doc.to_core()


def load(path: Union[str, Path], kind: Optional[str] = None):
    return loads(Path(path).read_text(), kind)


def dump(obj, path: Union[str, Path]) -> None:
    Path(path).write_text(dumps(obj))
