import click

from ..constants import default_tolerances
from ..core.eigen_solver import NoConvergence, eigh
from ..core.identity_engine import (
    DegenerateSpectrum,
    InvalidMagnitudes,
    NonFiniteProduct,
    eigenvector_magnitudes,
    gap_analysis,
    interlacing_check,
    magnitude_deviation,
    minor_spectra,
    reconstruct_magnitudes,
    verify_identity,
)
from ..eigenid_context import eigenid_command_settings
from ..report_flags import POSITIVE_FLOAT, report_flags, symmetrize_flag, tolerance_help
from ..run_report import ReportTable, RunReport


@click.command(**eigenid_command_settings)
@click.argument("matrix_file", type=str)
@click.option(
    "--tol",
    type=POSITIVE_FLOAT,
    help=tolerance_help(
        "Largest normalized gap accepted between both sides of the identity.",
        default_tolerances["tol"],
    ),
)
@click.option(
    "--all-cells",
    is_flag=True,
    help="List every (i, j) cell in the report, not only the worst one.",
)
@symmetrize_flag
@report_flags
@click.pass_obj
def verify(eigenid, matrix_file, tol, all_cells, symmetrize, as_json, output):
    """Check the eigenvector-eigenvalue identity on every entry of a matrix.

    \b
    \n\nLeft side of the identity is computed from the eigenvectors of the matrix, the right side only from eigenvalues of the matrix and its principal minors. The check passes when the largest normalized gap [bold]|lhs - rhs| / (1 + |lhs| + |rhs|)[/] stays within the tolerance.

    \n\nExits with [bold]0[/] on pass, [bold]1[/] on a failed check and [bold]2[/] on bad input.
    """
    tol = eigenid.tolerance("tol", tol)
    a = eigenid.load_input(matrix_file, symmetrize)
    if a.n < 2:
        eigenid.input_error("verify needs a matrix of order 2 or more.")

    report = RunReport("verify", matrix_file, tolerances={"tol": tol})

    eigenid.print_info(f"Checking {a.n * a.n} cells with {eigenid.workers} worker(s)")
    try:
        result = verify_identity(a, tol=tol, workers=eigenid.workers)
    except (NoConvergence, NonFiniteProduct) as msg:
        report.outcome = "error"
        report.message = str(msg)
        eigenid.emit_report(report, as_json, output)

    worst = result.worst
    report.outcome = "pass" if result.passed else "fail"
    report.results = {
        "order": a.n,
        "cells": len(result.cells),
        "max_gap": result.max_gap,
        "worst_i": worst.i + 1,
        "worst_j": worst.j + 1,
        "worst_lhs": worst.lhs,
        "worst_rhs": worst.rhs,
        "worst_abs_gap": worst.abs_gap,
    }

    if all_cells:
        table = ReportTable(["i", "j", "lhs", "rhs", "abs_gap", "normalized_gap"])
        for cell in result.cells:
            table.add_row(
                cell.i + 1,
                cell.j + 1,
                cell.lhs,
                cell.rhs,
                cell.abs_gap,
                cell.normalized_gap,
            )
        report.tables["cells"] = table

    eigenid.emit_report(report, as_json, output)


@click.command(**eigenid_command_settings)
@click.argument("matrix_file", type=str)
@click.option(
    "--tol",
    type=POSITIVE_FLOAT,
    help=tolerance_help(
        "Largest deviation accepted from the eigenvector magnitudes.",
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
@click.option(
    "--slack",
    type=POSITIVE_FLOAT,
    help=tolerance_help(
        "Slack allowed when checking interlacing of minor spectra.",
        default_tolerances["slack"],
    ),
)
@symmetrize_flag
@report_flags
@click.pass_obj
def reconstruct(
    eigenid, matrix_file, tol, gap_tol, slack, symmetrize, as_json, output
):
    """Rebuild squared eigenvector magnitudes from eigenvalues alone.

    \b
    \n\nEvery [bold]|v_ij|^2[/] is computed from the spectrum of the matrix and the spectra of its principal minors, then compared against the magnitudes of the eigenvectors. Interlacing of every minor spectrum is checked along the way.

    \n\nA spectrum that is not simple carries no per-entry information, such matrices are reported as an error with the blocking gap and exit with [bold]1[/].
    """
    tol = eigenid.tolerance("tol", tol)
    gap_tol = eigenid.tolerance("gap-tol", gap_tol)
    slack = eigenid.tolerance("slack", slack)

    a = eigenid.load_input(matrix_file, symmetrize)
    if a.n < 2:
        eigenid.input_error("reconstruct needs a matrix of order 2 or more.")

    report = RunReport(
        "reconstruct",
        matrix_file,
        tolerances={"tol": tol, "gap-tol": gap_tol, "slack": slack},
    )

    try:
        decomposition = eigh(a)
        minors = minor_spectra(a, workers=eigenid.workers)
    except NoConvergence as msg:
        report.outcome = "error"
        report.message = str(msg)
        eigenid.emit_report(report, as_json, output)

    lam = decomposition.eigenvalues
    info = gap_analysis(lam, gap_tol)
    report.results = {
        "order": a.n,
        "min_gap": info.min_gap,
        "spectral_range": info.spectral_range,
        "simple": info.simple,
    }

    violations = []
    for j, mu in enumerate(minors.spectra):
        interlacing = interlacing_check(lam, mu, slack)
        if not interlacing.passed:
            violations.append(f"M_{j + 1} at k={interlacing.violation_index + 1}")
    report.results["interlacing"] = not violations

    try:
        mags = reconstruct_magnitudes(lam, minors, gap_tol)
    except DegenerateSpectrum as e:
        k, m = e.gap_info.closest_pair
        report.outcome = "error"
        report.message = (
            f"spectrum is not simple, eigenvalues {k + 1} and {m + 1} are"
            f" {e.gap_info.min_gap!r} apart"
        )
        eigenid.emit_report(report, as_json, output)
    except InvalidMagnitudes as msg:
        report.outcome = "error"
        report.message = str(msg)
        eigenid.emit_report(report, as_json, output)

    deviation = magnitude_deviation(mags, eigenvector_magnitudes(decomposition))
    report.results["max_deviation"] = deviation

    passed = deviation <= tol and not violations
    report.outcome = "pass" if passed else "fail"
    if violations:
        report.message = "interlacing violated for " + ", ".join(violations)

    table = ReportTable(["i"] + [f"j{j + 1}" for j in range(a.n)])
    for i in range(a.n):
        table.add_row(i + 1, *(float(v) for v in mags.values[i]))
    report.tables["magnitudes"] = table

    eigenid.emit_report(report, as_json, output)
