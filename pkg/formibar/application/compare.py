from __future__ import annotations

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import pandas as pd

from formibar.application.pipeline import Pipeline, load_input
from formibar.clustering.components import cluster_ddg
from formibar.core.errors import InvalidParameterError, SizeBoundExceededError
from formibar.dms.trajectories import TrajectorySet, dms_from_trajectories
from formibar.metrics.bottleneck import bottleneck, stability_lower_bound
from formibar.metrics.interleaving import (
    interleaving_dg_exact,
    interleaving_dms_exact,
    interleaving_formigram_exact,
)
from formibar.utils.objects import document_kind
from formibar.utils.utils import ExtendedTime, format_time, get_settings

logger = logging.getLogger(__name__)

MODES = ("bottleneck", "lower-bound", "exact-interleaving")


@dataclass
class Comparer:
    """Pairwise distance matrix over a list of inputs, one task per unordered pair."""

    mode: str = "lower-bound"
    pipeline: Pipeline = field(default_factory=Pipeline)
    lam: Fraction = Fraction(0)
    size_bound: Optional[int] = None
    workers: Optional[int] = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise InvalidParameterError(f"unknown comparison mode {self.mode!r}; choose from {', '.join(MODES)}")
        self.lam = Fraction(self.lam)

    def distance(self, a, b) -> ExtendedTime:
        if self.mode == "exact-interleaving":
            return self._exact(a, b)
        bars_a, bars_b = self.pipeline.barcode(a), self.pipeline.barcode(b)
        if self.mode == "bottleneck":
            return bottleneck(bars_a, bars_b)
        return stability_lower_bound(bars_a, bars_b)

    def _exact(self, a, b) -> ExtendedTime:
        a, b = (dms_from_trajectories(o) if isinstance(o, TrajectorySet) else o for o in (a, b))
        kind_a, kind_b = document_kind(a), document_kind(b)
        if kind_a != kind_b:
            raise InvalidParameterError(f"exact interleaving compares inputs of one kind, got {kind_a} and {kind_b}")
        if kind_a == "dms":
            return interleaving_dms_exact(a, b, self.lam, self.size_bound)
        if kind_a == "dg":
            return interleaving_dg_exact(a, b, self.size_bound)
        if kind_a == "ddg":
            a, b = cluster_ddg(a, self.pipeline.functor), cluster_ddg(b, self.pipeline.functor)
        return interleaving_formigram_exact(a, b, self.size_bound)

    def _pair_task(self, names: Sequence[str], objects: Sequence, i: int, j: int) -> ExtendedTime:
        try:
            return self.distance(objects[i], objects[j])
        except SizeBoundExceededError as e:
            raise SizeBoundExceededError(f"{names[i]} vs {names[j]}: {e}", sizes=e.sizes, pair=f"{names[i]},{names[j]}") from e

    def matrix(self, objects: Sequence, names: Optional[Sequence[str]] = None) -> pd.DataFrame:
        names = list(names) if names is not None else [f"input{i}" for i in range(len(objects))]
        if len(objects) < 2:
            raise InvalidParameterError("comparison needs at least two inputs")
        pairs = list(itertools.combinations(range(len(objects)), 2))
        workers = self.workers or get_settings().workers
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda ij: self._pair_task(names, objects, *ij), pairs))
        values: Dict[Tuple[int, int], ExtendedTime] = dict(zip(pairs, results))
        rows: List[List[ExtendedTime]] = []
        for i in range(len(objects)):
            row = []
            for j in range(len(objects)):
                if i == j:
                    row.append(Fraction(0))
                else:
                    row.append(values[(min(i, j), max(i, j))])
            rows.append(row)
        logger.debug("%s matrix over %d input(s), %d pair(s)", self.mode, len(objects), len(pairs))
        return pd.DataFrame(rows, index=names, columns=names)

    def compare_files(self, paths: Sequence[Union[str, Path]], kind: Optional[str] = None) -> pd.DataFrame:
        objects = [load_input(p, kind) for p in paths]
        return self.matrix(objects, [Path(p).stem for p in paths])


def write_matrix_csv(frame: pd.DataFrame, path: Union[str, Path, None] = None) -> str:
    """Exact values as "p/q", +inf as "inf"; returns the text and writes it when a path is given."""
    text = frame.apply(lambda column: column.map(format_time)).to_csv(index_label="", lineterminator="\n")
    if path is not None:
        Path(path).write_text(text)
    return text
