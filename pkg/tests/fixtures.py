"""Worked examples shared by the test modules."""

import itertools
import random
from fractions import Fraction
from typing import List

from formibar.core.intervals import Interval
from formibar.core.partitions import SubPartition
from formibar.core.timeline import Formigram, Timeline, from_pieces
from formibar.utils.utils import INF

F = Fraction


def sp(universe, *blocks) -> SubPartition:
    return SubPartition.of(universe, blocks)


def three_phase_formigram() -> Formigram:
    """Saturated on {x1,x2,x3}: barcode (-inf,inf), (2,10), (6,17), (15,17)."""
    X = ("x1", "x2", "x3")
    whole = sp(X, X)
    singletons = sp(X, ["x1"], ["x2"], ["x3"])
    return from_pieces(
        X,
        [
            (Interval(-INF, F(2), False, True), whole),
            (Interval(F(2), F(6), False, True), sp(X, ["x1", "x2"], ["x3"])),
            (Interval.open(F(6), F(10)), singletons),
            (Interval.closed(F(10), F(15)), sp(X, ["x1"], ["x2", "x3"])),
            (Interval.open(F(15), F(17)), singletons),
            (Interval(F(17), INF, True, False), whole),
        ],
        whole,
    )


def births_and_deaths_formigram() -> Formigram:
    """Elements live on [-5,3], [-5,2] and [-3,5]; empty outside [-5,5]."""
    X = ("x1", "x2", "x3")
    return from_pieces(
        X,
        [
            (Interval(F(-5), F(-3), True, False), sp(X, ["x1", "x2"])),
            (Interval(F(-3), F(-1), True, False), sp(X, ["x1", "x2"], ["x3"])),
            (Interval.closed(F(-1), F(1)), sp(X, X)),
            (Interval(F(1), F(2), False, True), sp(X, ["x1", "x3"], ["x2"])),
            (Interval(F(2), F(3), False, True), sp(X, ["x1", "x3"])),
            (Interval(F(3), F(5), False, True), sp(X, ["x3"])),
        ],
        SubPartition.empty(X),
    )


def nonplanar_formigram() -> Formigram:
    """Three triples that split at 1 and regroup transversally at 2."""
    X = tuple(f"{c}{i}" for c in "xyz" for i in (1, 2, 3))
    rows = sp(X, ["x1", "x2", "x3"], ["y1", "y2", "y3"], ["z1", "z2", "z3"])
    columns = sp(X, ["x1", "y1", "z1"], ["x2", "y2", "z2"], ["x3", "y3", "z3"])
    return from_pieces(
        X,
        [
            (Interval(-INF, F(1), False, True), rows),
            (Interval.open(F(1), F(2)), sp(X, *[[x] for x in X])),
            (Interval(F(2), INF, True, False), columns),
        ],
        rows,
    )


def same_reeb_pair():
    """Two formigrams on 2 and 3 elements that split on (-3,-1) and (1,3)."""
    X = ("x1", "x2")
    Y = ("y1", "y2", "y3")
    theta_x = from_pieces(
        X,
        [(Interval.open(F(-3), F(-1)), sp(X, ["x1"], ["x2"])), (Interval.open(F(1), F(3)), sp(X, ["x1"], ["x2"]))],
        sp(X, X),
    )
    theta_y = from_pieces(
        Y,
        [
            (Interval.open(F(-3), F(-1)), sp(Y, ["y1", "y2"], ["y3"])),
            (Interval.open(F(1), F(3)), sp(Y, ["y1"], ["y2", "y3"])),
        ],
        sp(Y, Y),
    )
    return theta_x, theta_y


def tightness_pair():
    """One point against two points that are apart on (-1,1): d_I = 1, barcode bound 1/2."""
    theta_x = Timeline.constant(("x",), sp(("x",), ["x"]))
    Y = ("y1", "y2")
    theta_y = from_pieces(Y, [(Interval.open(F(-1), F(1)), sp(Y, ["y1"], ["y2"]))], sp(Y, Y))
    return theta_x, theta_y


def all_partitions(elements) -> List[List[List[str]]]:
    elements = list(elements)
    if not elements:
        return [[]]
    first, rest = elements[0], elements[1:]
    out = []
    for partition in all_partitions(rest):
        out.append([[first]] + partition)
        for i in range(len(partition)):
            out.append(partition[:i] + [[first] + partition[i]] + partition[i + 1:])
    return out


def constant_formigram(blocks) -> Formigram:
    universe = sorted(itertools.chain.from_iterable(blocks))
    return Timeline.constant(universe, sp(universe, *blocks))


def seeded(seed: int) -> random.Random:
    return random.Random(seed)
