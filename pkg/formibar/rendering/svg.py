from __future__ import annotations

import logging
from fractions import Fraction
from pathlib import Path
from typing import Dict, Optional, Tuple, Union

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from formibar.core.intervals import Barcode, Interval  # noqa: E402
from formibar.reeb.reeb_graph import ReebGraph  # noqa: E402
from formibar.utils.utils import is_finite  # noqa: E402

logger = logging.getLogger(__name__)

# fixed ids and no date stamp, so reruns write identical files
plt.rcParams["svg.hashsalt"] = "formibar"
plt.rcParams["svg.fonttype"] = "none"
_SVG_METADATA = {"Date": None, "Creator": None}


def drawing_window(barcode: Barcode, margin: Fraction = Fraction(1)) -> Tuple[Fraction, Fraction]:
    ends = barcode.finite_endpoints()
    if not ends:
        return Fraction(-1), Fraction(1)
    return ends[0] - margin, ends[-1] + margin


def _end_marker(interval: Interval, side: str) -> Tuple[str, str]:
    value = interval.left if side == "left" else interval.right
    closed = interval.left_closed if side == "left" else interval.right_closed
    if not is_finite(value):
        return ("<" if side == "left" else ">"), "black"
    if closed:
        return "s", "black"
    return "o", "white"


def render_barcode(
    barcode: Barcode,
    path: Union[str, Path],
    window: Optional[Tuple[Fraction, Fraction]] = None,
    title: Optional[str] = None,
) -> None:
    """Horizontal bars; closed ends are filled squares, open ends hollow circles, and
    infinite ends are clamped to the window with arrowheads."""
    lo, hi = window or drawing_window(barcode)
    fig, ax = plt.subplots(figsize=(6, 0.4 * max(len(barcode), 1) + 1))
    for row, interval in enumerate(barcode):
        left = float(interval.left) if is_finite(interval.left) else float(lo)
        right = float(interval.right) if is_finite(interval.right) else float(hi)
        if interval.is_point:
            ax.plot([left], [row], marker="o", color="black", markersize=5)
            continue
        ax.plot([left, right], [row, row], color="black", linewidth=2, solid_capstyle="butt")
        for side, x in (("left", left), ("right", right)):
            marker, face = _end_marker(interval, side)
            ax.plot([x], [row], marker=marker, markerfacecolor=face, markeredgecolor="black", markersize=6)
    ax.set_xlim(float(lo), float(hi))
    ax.set_ylim(-1, max(len(barcode), 1))
    ax.set_yticks([])
    ax.set_xlabel("t")
    if title:
        ax.set_title(title)
    fig.savefig(path, format="svg", metadata=_SVG_METADATA, bbox_inches="tight")
    plt.close(fig)
    logger.debug("wrote %d bar(s) to %s", len(barcode), path)


def _reeb_layout(reeb: ReebGraph) -> Dict[str, int]:
    elements = sorted({x for v in reeb.vertices for x in v.label})
    return {x: i for i, x in enumerate(elements)}


def render_reeb(reeb: ReebGraph, path: Union[str, Path], title: Optional[str] = None) -> None:
    """Vertices over their times, at the mean row of their elements; edges as straight segments."""
    rows = _reeb_layout(reeb)

    def height(label) -> float:
        return sum(rows[x] for x in label) / len(label)

    fig, ax = plt.subplots(figsize=(8, 0.5 * max(len(rows), 1) + 1))
    for e in reeb.edges:
        ax.plot(
            [float(e.source.time), float(e.target.time)],
            [height(e.source.label), height(e.target.label)],
            color="gray",
            linewidth=1 + len(e.label),
        )
    for v in reeb.vertices:
        y = height(v.label)
        ax.plot([float(v.time)], [y], marker="o", color="black", markersize=5)
        ax.annotate("{" + ",".join(v.label) + "}", (float(v.time), y), textcoords="offset points", xytext=(3, 4), fontsize=7)
    ax.set_xlim(float(reeb.start) - 0.5, float(reeb.end) + 0.5)
    ax.set_yticks(range(len(rows)))
    ax.set_yticklabels(list(rows))
    ax.set_xlabel("t")
    if title:
        ax.set_title(title)
    fig.savefig(path, format="svg", metadata=_SVG_METADATA, bbox_inches="tight")
    plt.close(fig)
    logger.debug("wrote Reeb graph with %d vertices to %s", len(reeb.vertices), path)
