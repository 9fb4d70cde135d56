from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional, Union

from formibar.clustering.components import cluster_ddg, get_functor, pi0_dg
from formibar.core.errors import FormatError
from formibar.core.intervals import Barcode
from formibar.core.timeline import Formigram, Timeline, ValidationReport, require_valid
from formibar.core.timeline import validate as validate_timeline
from formibar.dms.dms import DMS, validate_dms
from formibar.dms.rips import rips_dg
from formibar.dms.trajectories import TrajectorySet, dms_from_trajectories, read_trajectories_csv
from formibar.smoothing.smoothing import smooth_formigram
from formibar.utils.objects import document_kind, loads
from formibar.zigzag.barcode import barcode_of_formigram

logger = logging.getLogger(__name__)

INPUT_KINDS = ("dms", "dg", "ddg", "formigram")


def load_input(path: Union[str, Path], kind: Optional[str] = None):
    """Read a JSON document or a trajectory CSV; CSV files always become a DMS."""
    path = Path(path)
    if path.suffix.lower() == ".csv":
        if kind not in (None, "dms"):
            raise FormatError(f"{path.name}: trajectory files are read as a DMS, not as {kind}")
        return dms_from_trajectories(read_trajectories_csv(path))
    obj = loads(path.read_text(), kind)
    found = document_kind(obj)
    if found not in INPUT_KINDS:
        raise FormatError(f"{path.name}: a {found} document is not a pipeline input")
    return obj


@dataclass(frozen=True)
class Pipeline:
    """DMS -> DG -> formigram -> barcode, entered at whatever stage the input is."""

    delta: Fraction = Fraction(0)
    functor: str = "weak"
    smooth: Optional[Fraction] = None
    root_denominator: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "delta", Fraction(self.delta))
        if self.smooth is not None:
            object.__setattr__(self, "smooth", Fraction(self.smooth))
        get_functor(self.functor)

    def validate(self, obj) -> Optional[ValidationReport]:
        """A DMS raises InvalidDMSError when broken; a timeline gets its full violation report."""
        if isinstance(obj, TrajectorySet):
            obj = dms_from_trajectories(obj)
        if isinstance(obj, DMS):
            validate_dms(obj)
            return None
        return validate_timeline(obj)

    def formigram(self, obj: Union[DMS, Timeline, TrajectorySet]) -> Formigram:
        if isinstance(obj, TrajectorySet):
            obj = dms_from_trajectories(obj)
        kind = document_kind(obj)
        if kind == "dms":
            formigram = pi0_dg(rips_dg(obj, self.delta, root_denominator=self.root_denominator))
        elif kind == "dg":
            formigram = pi0_dg(obj)
        elif kind == "ddg":
            formigram = cluster_ddg(obj, self.functor)
        elif kind == "formigram":
            require_valid(obj)
            formigram = obj
        else:
            raise FormatError(f"cannot cluster a {kind}")
        if self.smooth:
            formigram = smooth_formigram(formigram, self.smooth)
        logger.debug("%s -> formigram with %d critical time(s)", kind, len(formigram.crit))
        return formigram

    def barcode(self, obj: Union[DMS, Timeline, TrajectorySet]) -> Barcode:
        return barcode_of_formigram(self.formigram(obj))

    def run(self, path: Union[str, Path], kind: Optional[str] = None) -> Barcode:
        return self.barcode(load_input(path, kind))
