import logging
import math
import os
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Optional, Union

import coloredlogs
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict

from formibar.core.errors import FormatError, InvalidParameterError

INF = math.inf

# Finite times are Fractions; only the two infinities are floats.
ExtendedTime = Union[Fraction, float]


def to_fraction(value: Union[str, int, float, Fraction, Decimal]) -> Fraction:
    """Parse an exact rational from "p/q", a decimal string, an int or a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise FormatError(f"not a number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise FormatError(f"expected a finite number, got {value!r}")
        return Fraction(value)
    if isinstance(value, Decimal):
        return Fraction(value)
    text = str(value).strip()
    try:
        if "/" in text:
            num, den = text.split("/", 1)
            return Fraction(int(num.strip()), int(den.strip()))
        return Fraction(Decimal(text))
    except (ValueError, ZeroDivisionError, InvalidOperation) as e:
        raise FormatError(f"cannot read {value!r} as an exact rational") from e


def to_extended(value: Union[str, int, float, Fraction]) -> ExtendedTime:
    if isinstance(value, float) and math.isinf(value):
        return value
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("inf", "+inf", "infinity", "+infinity", "∞", "+∞"):
            return INF
        if text in ("-inf", "-infinity", "-∞"):
            return -INF
    return to_fraction(value)


def format_time(value: ExtendedTime) -> str:
    if isinstance(value, float):
        if value == INF:
            return "inf"
        if value == -INF:
            return "-inf"
        raise FormatError(f"finite times must be exact rationals, got {value!r}")
    return str(Fraction(value))


def is_finite(value: ExtendedTime) -> bool:
    return not (isinstance(value, float) and math.isinf(value))


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """The rational with the smallest denominator in [lo, hi] (Stern-Brocot descent)."""
    lo, hi = Fraction(lo), Fraction(hi)
    if lo > hi:
        raise InvalidParameterError(f"empty range [{lo}, {hi}]")
    if lo <= 0 <= hi:
        return Fraction(0)
    if hi < 0:
        return -simplest_between(-hi, -lo)
    whole = math.floor(lo)
    if whole == lo or whole + 1 <= hi:
        return Fraction(math.ceil(lo))
    return whole + 1 / simplest_between(1 / (hi - whole), 1 / (lo - whole))


class Settings(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    size_bound: int = 12
    gh_bound: int = 5
    oracle_levels: int = 40
    root_denominator: int = 10**6
    bisection_tolerance: Fraction = Fraction(1, 2**20)
    workers: int = 4
    log_level: str = "INFO"

    @classmethod
    def from_env(cls) -> "Settings":
        load_dotenv()
        values = {}
        env_names = {
            "size_bound": "FORMIBAR_SIZE_BOUND",
            "gh_bound": "FORMIBAR_GH_BOUND",
            "oracle_levels": "FORMIBAR_ORACLE_LEVELS",
            "root_denominator": "FORMIBAR_ROOT_DENOMINATOR",
            "workers": "FORMIBAR_WORKERS",
        }
        for field, name in env_names.items():
            raw = os.getenv(name)
            if raw:
                try:
                    values[field] = int(raw)
                except ValueError:
                    raise FormatError(f"{name}={raw!r} is not an integer") from None
        tolerance = os.getenv("FORMIBAR_BISECTION_TOLERANCE")
        if tolerance:
            try:
                values["bisection_tolerance"] = to_fraction(tolerance)
            except FormatError as e:
                raise FormatError(f"FORMIBAR_BISECTION_TOLERANCE: {e}") from e
        level = os.getenv("FORMIBAR_LOG_LEVEL")
        if level:
            values["log_level"] = level.upper()
        return cls(**values)


_settings: Optional[Settings] = None


def get_settings() -> Settings:
    global _settings
    if _settings is None:
        _settings = Settings.from_env()
    return _settings


def setup_logging(level: Optional[str] = None) -> None:
    coloredlogs.install(
        level=level or get_settings().log_level,
        logger=logging.getLogger("formibar"),
        fmt="%(asctime)s %(name)s %(levelname)s %(message)s",
    )
