import statistics
import time

import click
import numpy as np
from rich.progress import BarColumn, MofNCompleteColumn, Progress, TextColumn

from ..constants import default_tolerances
from ..core.eigen_solver import NoConvergence, eigh, spectrum
from ..core.identity_engine import (
    DegenerateSpectrum,
    InvalidMagnitudes,
    eigenvector_magnitudes,
    magnitude_deviation,
    minor_spectra,
    reconstruct_magnitudes,
)
from ..core.matrix_core import Ensemble, random_hermitian
from ..eigenid_context import eigenid_command_settings
from ..report_flags import POSITIVE_FLOAT, report_flags, tolerance_help
from ..run_report import ReportTable, RunReport
from .gen_commands import SEED_RANGE


def well_separated_spectrum(n: int) -> np.ndarray:
    """n eigenvalues centered on zero, one apart from each other."""
    return np.arange(n, dtype=float) - (n - 1) / 2


def _median_seconds(func, repetitions: int):
    """Run func repetitions times, return the median wall time and the last result."""
    timings = []
    result = None
    for _ in range(repetitions):
        start = time.perf_counter()
        result = func()
        timings.append(time.perf_counter() - start)
    return statistics.median(timings), result


@click.command(**eigenid_command_settings)
@click.option(
    "-n",
    "--order",
    "orders",
    type=click.IntRange(min=2),
    multiple=True,
    help="Matrix order to benchmark, can be given several times.",
)
@click.option(
    "--seed", type=SEED_RANGE, default=0, show_default=True, help="Random seed."
)
@click.option(
    "--repetitions",
    type=click.IntRange(min=1),
    default=3,
    show_default=True,
    help="Timed runs per order, the median is reported.",
)
@click.option(
    "--tol",
    type=POSITIVE_FLOAT,
    help=tolerance_help(
        "Largest deviation accepted between both magnitude grids.",
        default_tolerances["tol"],
    ),
)
@click.option(
    "--gap-tol",
    type=POSITIVE_FLOAT,
    help=tolerance_help(
        "Relative eigenvalue gap below which the spectrum is not simple.",
        default_tolerances["gap-tol"],
    ),
)
@report_flags
@click.pass_obj
def bench(eigenid, orders, seed, repetitions, tol, gap_tol, as_json, output):
    """Time magnitude reconstruction through minors against a direct eigensolve.

    \b
    \n\nFor every order a matrix with a prescribed, well separated spectrum is generated. Reconstruction from minor spectra and the direct eigendecomposition are both timed, the median over repetitions is reported together with the largest deviation between the two magnitude grids.

    \n\nTimings vary from run to run, every other field of the report is deterministic.
    """
    tol = eigenid.tolerance("tol", tol)
    gap_tol = eigenid.tolerance("gap-tol", gap_tol)

    report = RunReport(
        "bench",
        f"seed={seed}",
        tolerances={"tol": tol, "gap-tol": gap_tol},
    )
    report.results = {"repetitions": repetitions}
    table = ReportTable(["n", "reconstruct_s", "eigh_s", "max_deviation"])
    passed = True

    progress = Progress(
        TextColumn("[bold blue]n={task.fields[order]}"),
        BarColumn(),
        MofNCompleteColumn(),
        console=eigenid.err_console,
        transient=True,
        disable=not eigenid.err_console.is_terminal,
    )

    with progress:
        task = progress.add_task("bench", total=len(orders), order="-")
        for n in orders:
            progress.update(task, order=n)
            eigenid.print_info(f"Benchmarking order {n}")

            a = random_hermitian(
                n,
                seed,
                ensemble=Ensemble.PRESCRIBED_SPECTRUM,
                spectrum=well_separated_spectrum(n),
            )

            def through_minors():
                lam = spectrum(a)
                return reconstruct_magnitudes(
                    lam, minor_spectra(a, workers=eigenid.workers), gap_tol
                )

            def direct():
                return eigenvector_magnitudes(eigh(a))

            try:
                reconstruct_s, reconstructed = _median_seconds(
                    through_minors, repetitions
                )
                eigh_s, direct_mags = _median_seconds(direct, repetitions)
            except (NoConvergence, DegenerateSpectrum, InvalidMagnitudes) as msg:
                report.outcome = "error"
                report.message = f"order {n}: {msg}"
                report.tables["orders"] = table
                eigenid.emit_report(report, as_json, output)

            deviation = magnitude_deviation(reconstructed, direct_mags)
            passed = passed and deviation <= tol
            table.add_row(n, reconstruct_s, eigh_s, deviation)
            progress.advance(task)

    report.outcome = "pass" if passed else "fail"
    report.tables["orders"] = table
    eigenid.emit_report(report, as_json, output)
