import pytest

from eigenid.core.matrix_core import Ensemble, random_hermitian
from eigenid.core.matrix_file import save_matrix

from . import helpers

STEPS = [
    "corner_identity",
    "block_factor_check",
    "unitarity_block_check",
    "sylvester_check",
]


def step_names(report):
    """Names of the steps, in report order."""
    return [row[0] for row in report["tables"]["steps"]["rows"]]


def test_prove_defaults(matrix_files):
    """Without flags the largest eigenvalue and its own component are used."""
    result, report = helpers.invoke_json(["prove", matrix_files["stencil"]])

    assert result.exit_code == 0
    assert report["outcome"] == "pass"
    assert report["results"]["index"] == 3
    assert report["results"]["component"] == 3
    assert report["results"]["eigenvalue"] == pytest.approx(2 + 2**0.5, abs=1e-12)
    assert step_names(report) == STEPS
    assert all(row[3] for row in report["tables"]["steps"]["rows"])


def test_prove_details(matrix_files):
    """Every step lists its measured quantities."""
    _, report = helpers.invoke_json(["prove", matrix_files["diag_123"], "-i", "1"])

    details = report["tables"]["details"]
    assert details["columns"] == ["step", "quantity", "value"]
    corner = {row[1]: row[2] for row in details["rows"] if row[0] == "corner_identity"}
    assert list(corner) == ["det_minor", "det_lambda", "u_nn_sq", "kernel_eigenvalue"]
    assert corner["u_nn_sq"] == 1.0


@pytest.mark.parametrize("index", ["1", "2"])
@pytest.mark.parametrize("component", ["1", "2"])
def test_prove_exchange(matrix_files, index, component):
    """Both eigenvalues and both components of the exchange matrix."""
    result, report = helpers.invoke_json(
        ["prove", matrix_files["exchange"], "-i", index, "-j", component]
    )

    assert result.exit_code == 0
    assert report["results"]["component"] == int(component)


def test_prove_extended(workspace):
    """--extended appends the determinant and the reduction form steps."""
    save_matrix("m.txt", random_hermitian(6, 3, ensemble=Ensemble.REAL_SYMMETRIC))

    result, report = helpers.invoke_json(["prove", "m.txt", "--extended", "-i", "2"])

    assert result.exit_code == 0
    assert step_names(report) == STEPS + [
        "determinant_spectrum_check",
        "reduction_form_check",
    ]


def test_prove_degenerate(matrix_files):
    """A repeated eigenvalue is reported as an error naming it."""
    result, report = helpers.invoke_json(["prove", matrix_files["identity"]])

    assert result.exit_code == 1
    assert report["outcome"] == "error"
    assert report["message"] == "eigenvalue 1.0 is not simple"
    assert report["tables"] == {}


def test_prove_custom_tolerances(matrix_files):
    """Tolerance flags end up in the report and in the step rows."""
    result, report = helpers.invoke_json(
        ["prove", matrix_files["stencil"], "--unitary-tol", "1e-6", "--block-tol", "1e-5"]
    )

    assert result.exit_code == 0
    assert report["tolerances"] == {
        "tol": 1e-8,
        "gap-tol": 1e-8,
        "unitary-tol": 1e-6,
        "block-tol": 1e-5,
    }
    rows = {row[0]: row for row in report["tables"]["steps"]["rows"]}
    assert rows["unitarity_block_check"][2] == 1e-6
    assert rows["block_factor_check"][2] == 1e-5


def test_prove_gap_tol(matrix_files, workspace):
    """A gap tolerance above the stencil gaps makes lambda_i degenerate."""
    # Stencil gaps are sqrt(2), range is 2 sqrt(2).
    result, report = helpers.invoke_json(
        ["prove", matrix_files["stencil"], "--gap-tol", "0.5"]
    )

    assert result.exit_code == 1
    assert report["outcome"] == "error"
    assert report["tolerances"]["gap-tol"] == 0.5
    assert report["message"].endswith("is not simple")

    helpers.create_and_write(workspace, "eigenid.yml", "tolerances:\n  gap-tol: 0.5\n")
    result, report = helpers.invoke_json(["prove", matrix_files["stencil"]])
    assert result.exit_code == 1
    assert report["tolerances"]["gap-tol"] == 0.5

    result, _ = helpers.invoke_json(
        ["prove", matrix_files["stencil"], "--gap-tol", "1e-8"]
    )
    assert result.exit_code == 0


@pytest.mark.parametrize(
    "flags",
    [["-i", "0"], ["-i", "4"], ["-j", "4"], ["-i", "1", "-j", "-1"]],
)
def test_prove_index_out_of_range(matrix_files, flags):
    """Indices are 1-based and must lie within the matrix."""
    result = helpers.invoke(["prove", matrix_files["stencil"]] + flags)

    assert result.exit_code == 2
    assert "outside of [1, 3]" in result.stderr


def test_prove_single(matrix_files):
    """A 1 x 1 matrix has no corner form."""
    result = helpers.invoke(["prove", matrix_files["single"]])
    assert result.exit_code == 2
