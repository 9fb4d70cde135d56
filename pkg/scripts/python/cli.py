import functools
import logging
import traceback
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Tuple

import typer
from devtools import pprint
from dotenv import load_dotenv

from formibar.application.compare import MODES, Comparer, write_matrix_csv
from formibar.application.pipeline import INPUT_KINDS, Pipeline, load_input
from formibar.core.errors import FormibarError, InvalidTimelineError
from formibar.dms.trajectories import write_trajectories_csv
from formibar.reeb.export import export_dot
from formibar.reeb.reeb_graph import reeb_of_formigram
from formibar.rendering.svg import render_barcode, render_reeb
from formibar.utils.objects import BarcodeDoc, dumps
from formibar.utils.synthetic import three_regime_fixture
from formibar.utils.utils import format_time, get_settings, setup_logging, to_fraction

app = typer.Typer()
logger = logging.getLogger("formibar.cli")


def guarded(command):
    """Library errors exit with status 1, anything unexpected with status 2."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except (typer.Exit, typer.Abort, typer.BadParameter):
            raise
        except FormibarError as e:
            typer.echo(f"error: {e}", err=True)
            if isinstance(e, InvalidTimelineError) and e.report is not None and str(e.report) != str(e):
                typer.echo(str(e.report), err=True)
            raise typer.Exit(code=1)
        except Exception:
            typer.echo(traceback.format_exc(), err=True)
            raise typer.Exit(code=2)

    return wrapper


def _start(verbose: bool) -> None:
    load_dotenv()
    setup_logging("DEBUG" if verbose else None)


def _number(text: Optional[str]) -> Optional[Fraction]:
    return to_fraction(text) if text is not None else None


def _check_kind(kind: Optional[str]) -> None:
    if kind is not None and kind not in INPUT_KINDS:
        raise typer.BadParameter(f"--kind must be one of {', '.join(INPUT_KINDS)}")


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        typer.echo(text, nl=False)
    else:
        out.write_text(text)


@app.command()
@guarded
def barcode(
    input: Path,
    kind: Optional[str] = None,
    delta: str = "0",
    functor: str = "weak",
    smooth: Optional[str] = None,
    out: Optional[Path] = None,
    svg: Optional[Path] = None,
    verbose: bool = False,
) -> None:
    """
    Cluster the input into a formigram and write its barcode as JSON
    """
    _start(verbose)
    _check_kind(kind)
    pipeline = Pipeline(_number(delta), functor, _number(smooth), get_settings().root_denominator)
    bars = pipeline.run(input, kind)
    meta = {"source": input.name, "delta": format_time(pipeline.delta), "functor": functor}
    if pipeline.smooth is not None:
        meta["smooth"] = format_time(pipeline.smooth)
    _emit(BarcodeDoc.from_core(bars, **meta).model_dump_json(indent=2) + "\n", out)
    if svg is not None:
        render_barcode(bars, svg, title=input.stem)
    logger.info("%d bar(s) from %s", len(bars), input)


@app.command()
@guarded
def compare(
    inputs: List[Path],
    mode: str = "lower-bound",
    kind: Optional[str] = None,
    delta: str = "0",
    lam: str = typer.Option("0", "--lambda"),
    functor: str = "weak",
    smooth: Optional[str] = None,
    out: Optional[Path] = None,
    verbose: bool = False,
) -> None:
    """
    Pairwise distance matrix (CSV) between two or more inputs
    """
    _start(verbose)
    _check_kind(kind)
    if mode not in MODES:
        raise typer.BadParameter(f"--mode must be one of {', '.join(MODES)}")
    if len(inputs) < 2:
        raise typer.BadParameter("compare needs at least two inputs")
    pipeline = Pipeline(_number(delta), functor, _number(smooth), get_settings().root_denominator)
    comparer = Comparer(mode, pipeline, _number(lam), get_settings().size_bound)
    frame = comparer.compare_files(inputs, kind)
    _emit(write_matrix_csv(frame), out)
    if out is not None:
        print(f"{mode} matrix over {len(inputs)} inputs written to {out}")


@app.command()
@guarded
def reeb(
    input: Path,
    window: Optional[Tuple[str, str]] = typer.Option(None, help="window start and end"),
    format: str = "dot",
    kind: Optional[str] = None,
    delta: str = "0",
    functor: str = "weak",
    out: Optional[Path] = None,
    verbose: bool = False,
) -> None:
    """
    Reeb graph of the input's formigram over a window, as DOT, JSON or SVG
    """
    _start(verbose)
    _check_kind(kind)
    if format not in ("dot", "json", "svg"):
        raise typer.BadParameter("--format must be dot, json or svg")
    if format == "svg" and out is None:
        raise typer.BadParameter("--format svg needs --out")
    formigram = Pipeline(_number(delta), functor).formigram(load_input(input, kind))
    if window is None:
        start, end = (formigram.crit[0], formigram.crit[-1]) if formigram.crit else (Fraction(0), Fraction(0))
    else:
        start, end = to_fraction(window[0]), to_fraction(window[1])
    graph = reeb_of_formigram(formigram, start, end)
    if format == "svg":
        render_reeb(graph, out, title=input.stem)
    elif format == "json":
        _emit(dumps(graph), out)
    else:
        _emit(export_dot(graph), out)


@app.command()
@guarded
def validate(input: Path, kind: Optional[str] = None, verbose: bool = False) -> None:
    """
    Check a timeline or DMS file and print every violated invariant
    """
    _start(verbose)
    _check_kind(kind)
    obj = load_input(input, kind)
    report = Pipeline().validate(obj)
    if report is None:
        print(f"valid dms on {len(obj.points)} points")
        return
    print(str(report))
    if not report.ok:
        pprint(report.codes())
        raise typer.Exit(code=1)


@app.command()
@guarded
def synth(
    out: Path = Path("synthetic"),
    seed: int = 0,
    per_regime: int = 2,
    verbose: bool = False,
) -> None:
    """
    Write the three-regime flocking trajectories as CSV files
    """
    _start(verbose)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    counters = {}
    for regime, trajectories in three_regime_fixture(seed, per_regime):
        counters[regime] = counters.get(regime, 0) + 1
        path = out / f"{regime}_{counters[regime]}.csv"
        write_trajectories_csv(trajectories, path)
        written.append(str(path))
    pprint(written)


if __name__ == "__main__":
    app()
