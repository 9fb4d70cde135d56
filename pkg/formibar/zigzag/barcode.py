from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from formibar.core.intervals import Barcode, Interval
from formibar.core.timeline import Formigram
from formibar.utils.utils import INF
from formibar.zigzag.diagram import ZigzagSetDiagram, ZZInterval, formigram_to_diagram
from formibar.zigzag.reduction import zigzag_barcode_indices


def index_to_interval(bar: ZZInterval, times: Sequence[Fraction], length: int) -> Interval:
    """Translate a level-index range into a real interval.

    Odd level 2i-1 is the critical time c_i; even level 2i is the open piece right of c_i.
    """
    if length == 1:
        return Interval.real_line()
    last = length - 1
    if bar.lo == 0:
        left, left_closed = -INF, False
    elif bar.lo % 2 == 1:
        left, left_closed = times[(bar.lo + 1) // 2 - 1], True
    else:
        left, left_closed = times[bar.lo // 2 - 1], False
    if bar.hi == last:
        right, right_closed = INF, False
    elif bar.hi % 2 == 1:
        right, right_closed = times[(bar.hi + 1) // 2 - 1], True
    else:
        right, right_closed = times[bar.hi // 2], False
    return Interval(left, right, left_closed, right_closed)


def barcode_of_diagram(diagram: ZigzagSetDiagram, bars: Iterable[ZZInterval] = None) -> Barcode:
    bars = zigzag_barcode_indices(diagram) if bars is None else bars
    return Barcode.of(index_to_interval(b, diagram.times, diagram.length) for b in bars)


def barcode_of_formigram(formigram: Formigram) -> Barcode:
    return barcode_of_diagram(formigram_to_diagram(formigram))
