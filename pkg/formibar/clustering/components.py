from __future__ import annotations

import logging
from typing import Callable, Dict

import networkx as nx

from formibar.core.errors import InvalidParameterError
from formibar.core.graphs import Digraph, Graph
from formibar.core.partitions import SubPartition, UnionFind
from formibar.core.timeline import DynamicDigraph, DynamicGraph, Formigram, require_valid

logger = logging.getLogger(__name__)

ClusteringFunctor = Callable[..., SubPartition]


def pi0_graph(g: Graph, universe=None) -> SubPartition:
    """Connected components of g, as a sub-partition of universe (default: its vertices)."""
    uf = UnionFind(g.vertices)
    for e in g.edges:
        members = sorted(e)
        if len(members) == 2:
            uf.union(members[0], members[1])
    return SubPartition(frozenset(universe) if universe is not None else g.vertices, frozenset(uf.to_sets()))


def weak_components(g: Digraph, universe=None) -> SubPartition:
    uf = UnionFind(g.vertices)
    for a, b in g.arcs:
        uf.union(a, b)
    return SubPartition(frozenset(universe) if universe is not None else g.vertices, frozenset(uf.to_sets()))


def reciprocal_components(g: Digraph, universe=None) -> SubPartition:
    uf = UnionFind(g.vertices)
    for a, b in g.arcs:
        if (b, a) in g.arcs:
            uf.union(a, b)
    return SubPartition(frozenset(universe) if universe is not None else g.vertices, frozenset(uf.to_sets()))


def nonreciprocal_components(g: Digraph, universe=None) -> SubPartition:
    digraph = nx.DiGraph()
    digraph.add_nodes_from(sorted(g.vertices))
    digraph.add_edges_from(sorted(g.arcs))
    blocks = frozenset(frozenset(c) for c in nx.strongly_connected_components(digraph))
    return SubPartition(frozenset(universe) if universe is not None else g.vertices, blocks)


FUNCTORS: Dict[str, ClusteringFunctor] = {
    "weak": weak_components,
    "reciprocal": reciprocal_components,
    "nonreciprocal": nonreciprocal_components,
}


def register_functor(name: str, functor: ClusteringFunctor) -> None:
    # not checked for functoriality
    FUNCTORS[name] = functor


def get_functor(name: str) -> ClusteringFunctor:
    try:
        return FUNCTORS[name]
    except KeyError:
        raise InvalidParameterError(f"unknown clustering functor {name!r}; choose from {sorted(FUNCTORS)}") from None


def cluster_digraph(g: Digraph, functor: str = "weak", universe=None) -> SubPartition:
    return get_functor(functor)(g, universe=universe)


def pi0_dg(dg: DynamicGraph) -> Formigram:
    require_valid(dg)
    universe = dg.universe
    formigram = dg.map(lambda g: pi0_graph(g, universe)).pruned()
    logger.debug("pi0: %d critical time(s) -> %d", len(dg.crit), len(formigram.crit))
    return formigram


def cluster_ddg(ddg: DynamicDigraph, functor: str = "weak") -> Formigram:
    require_valid(ddg)
    universe = ddg.universe
    fn = get_functor(functor)
    return ddg.map(lambda g: fn(g, universe=universe)).pruned()
