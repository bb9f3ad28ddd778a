import click

from ..constants import default_tolerances
from ..core.eigen_solver import NoConvergence
from ..core.proof_checker import (
    DegenerateKernel,
    NormalizationViolated,
    NotShifted,
    NotUnitary,
    full_proof_trace,
)
from ..eigenid_context import eigenid_command_settings
from ..report_flags import POSITIVE_FLOAT, report_flags, symmetrize_flag, tolerance_help
from ..run_report import ReportTable, RunReport


@click.command(**eigenid_command_settings)
@click.argument("matrix_file", type=str)
@click.option(
    "-i",
    "--index",
    type=int,
    help="Eigenvalue index, 1-based in ascending order. Default: the largest one.",
)
@click.option(
    "-j",
    "--component",
    type=int,
    help="Eigenvector component index, 1-based. Default: same as --index.",
)
@click.option(
    "--tol",
    type=POSITIVE_FLOAT,
    help=tolerance_help(
        "Tolerance of the corner identity and of the extended steps.",
        default_tolerances["tol"],
    ),
)
@click.option(
    "--gap-tol",
    type=POSITIVE_FLOAT,
    help=tolerance_help(
        "Relative eigenvalue gap below which lambda_i is not simple.",
        default_tolerances["gap-tol"],
    ),
)
@click.option(
    "--unitary-tol",
    type=POSITIVE_FLOAT,
    help=tolerance_help("Tolerance of the unitarity block relations.", "1e-10 * n"),
)
@click.option(
    "--block-tol",
    type=POSITIVE_FLOAT,
    help=tolerance_help("Tolerance of the block factorization.", "1e-9 * n"),
)
@click.option(
    "--extended",
    is_flag=True,
    help=(
        "Also check the determinant of M_n against its eigenvalues and the reduction"
        " form at component 1."
    ),
)
@symmetrize_flag
@report_flags
@click.pass_obj
def prove(
    eigenid,
    matrix_file,
    index,
    component,
    tol,
    gap_tol,
    unitary_tol,
    block_tol,
    extended,
    symmetrize,
    as_json,
    output,
):
    """Check every step of the block matrix proof of the corner form.

    \b
    \n\nComponent [bold]j[/] is moved to the last position, the matrix is shifted by its eigenvalue [bold]lambda_i[/], and then [bold]|M_n| = |Lambda_n| |u_nn|^2[/], the block factorization of [bold]M_n[/], the unitarity relations and the Sylvester determinant step are checked in that order.

    \n\nA repeated eigenvalue [bold]lambda_i[/] degenerates the corner form, it is reported as an error naming the eigenvalue and exits with [bold]1[/].
    """
    tol = eigenid.tolerance("tol", tol)
    gap_tol = eigenid.tolerance("gap-tol", gap_tol)
    unitary_tol = eigenid.tolerance("unitary-tol", unitary_tol)
    block_tol = eigenid.tolerance("block-tol", block_tol)

    a = eigenid.load_input(matrix_file, symmetrize)
    if a.n < 2:
        eigenid.input_error("prove needs a matrix of order 2 or more.")

    index = a.n if index is None else index
    component = index if component is None else component
    for name, value in (("--index", index), ("--component", component)):
        if not 1 <= value <= a.n:
            eigenid.input_error(f"{name} {value} is outside of [1, {a.n}].")

    report = RunReport(
        "prove",
        matrix_file,
        tolerances={
            "tol": tol,
            "gap-tol": gap_tol,
            "unitary-tol": unitary_tol,
            "block-tol": block_tol,
        },
    )
    report.results = {"order": a.n, "index": index, "component": component}

    eigenid.print_info(f"Proving the corner form for i={index}, j={component}")
    try:
        trace = full_proof_trace(
            a,
            index - 1,
            component - 1,
            tol=tol,
            extended=extended,
            unitary_tol=unitary_tol,
            block_tol=block_tol,
            gap_tol=gap_tol,
        )
    except DegenerateKernel as e:
        report.outcome = "error"
        report.message = f"eigenvalue {e.eigenvalue!r} is not simple"
        eigenid.emit_report(report, as_json, output)
    except (NoConvergence, NotShifted, NotUnitary, NormalizationViolated) as msg:
        report.outcome = "error"
        report.message = str(msg)
        eigenid.emit_report(report, as_json, output)

    report.outcome = "pass" if trace.passed else "fail"
    report.results["eigenvalue"] = trace.eigenvalue

    steps = ReportTable(["step", "defect", "tolerance", "passed"])
    details = ReportTable(["step", "quantity", "value"])
    for step in trace.steps:
        steps.add_row(step.name, step.defect, step.tolerance, step.passed)
        for key, value in step.details.items():
            details.add_row(step.name, key, value)
    report.tables["steps"] = steps
    report.tables["details"] = details

    eigenid.emit_report(report, as_json, output)
