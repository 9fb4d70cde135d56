from __future__ import annotations

from typing import Optional, TYPE_CHECKING

if TYPE_CHECKING:
    from formibar.core.timeline import ValidationReport


class FormibarError(Exception):
    """Root of every error raised on purpose by formibar."""


class FormatError(FormibarError, ValueError):
    pass


class UniverseMismatchError(FormibarError, ValueError):
    pass


class RefinementError(FormibarError, ValueError):
    pass


class InvalidTimelineError(FormibarError, ValueError):
    def __init__(self, message: str, report: Optional["ValidationReport"] = None):
        super().__init__(message)
        self.report = report


class EmptyIntervalError(FormibarError, ValueError):
    pass


class InvalidWindowError(FormibarError, ValueError):
    pass


class SizeBoundExceededError(FormibarError):
    def __init__(self, message: str, sizes: tuple[int, ...] = (), pair: Optional[str] = None):
        super().__init__(message)
        self.sizes = sizes
        self.pair = pair


class NotADendrogramError(FormibarError, ValueError):
    pass


class NotUltrametricError(FormibarError, ValueError):
    pass


class InvalidDMSError(FormibarError, ValueError):
    pass


class NonPiecewiseLinearError(FormibarError, ValueError):
    pass


class MalformedValueError(FormibarError, ValueError):
    """A core value was built with a broken structural invariant."""


class InvalidParameterError(FormibarError, ValueError):
    """A caller-supplied option is out of range or unknown."""


class UnsupportedObjectError(FormibarError, TypeError):
    pass
