import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eigenid.core.eigen_solver import eigh, spectrum
from eigenid.core.identity_engine import gap_analysis, verify_identity
from eigenid.core.matrix_core import (
    BadShape,
    Ensemble,
    IndexOutOfRange,
    TooSmall,
    principal_minor,
    random_hermitian,
    random_unitary,
    shift,
    symmetric_permutation,
)
from eigenid.core.proof_checker import (
    DegenerateKernel,
    NormalizationViolated,
    NotShifted,
    NotUnitary,
    block_factor_check,
    corner_identity,
    determinant,
    determinant_spectrum_check,
    full_proof_trace,
    reduce_to_zero,
    reduction_form_check,
    sylvester_check,
    unitarity_block_check,
)

from . import helpers

BASE_STEPS = [
    "corner_identity",
    "block_factor_check",
    "unitarity_block_check",
    "sylvester_check",
]


@pytest.mark.parametrize(
    "grid, expected",
    [
        (np.diag([2.0, 3.0]), 6),
        (helpers.EXCHANGE, -1),
        (np.zeros((0, 0)), 1),
        ([[1.0, 2.0], [2.0, 4.0]], 0),
        ([[0, 1j], [-1j, 0]], -1),
    ],
)
def test_determinant_examples(grid, expected):
    """Pivoting, sign flips, the empty grid and an exactly singular grid."""
    assert determinant(grid) == expected


def test_determinant_bad_shape():
    """Only square grids have a determinant."""
    with pytest.raises(BadShape):
        determinant([[1.0, 2.0, 3.0]])
    with pytest.raises(BadShape):
        determinant([1.0, 2.0])


@pytest.mark.parametrize("n", [1, 4, 9, 17, 32])
def test_determinant_matches_spectrum(n):
    """Determinant equals the product of eigenvalues to a relative 1e-8."""
    rng = np.random.default_rng(n)
    lam = rng.uniform(1.0, 3.0, n) * rng.choice([-1.0, 1.0], n)
    a = random_hermitian(n, n, ensemble=Ensemble.PRESCRIBED_SPECTRUM, spectrum=lam)

    product = np.prod(spectrum(a))
    assert abs(determinant(a) - product) <= 1e-8 * abs(product)

    step = determinant_spectrum_check(a)
    assert step.passed
    assert step.name == "determinant_spectrum_check"


def test_determinant_matches_numpy():
    """numpy's determinant serves as an independent oracle on general grids."""
    rng = np.random.default_rng(1)
    for n in range(1, 12):
        grid = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        expected = np.linalg.det(grid)
        assert abs(determinant(grid) - expected) <= 1e-9 * abs(expected)


def test_reduce_to_zero():
    """The chosen eigenvalue becomes zero, up to rounding."""
    a = random_hermitian(6, 2, ensemble=Ensemble.COMPLEX_HERMITIAN)
    for i in range(6):
        lam = spectrum(reduce_to_zero(a, i))
        assert abs(lam[i]) <= 1e-12 * (1 + np.max(np.abs(lam)))

    with pytest.raises(IndexOutOfRange):
        reduce_to_zero(a, 6)


def test_corner_identity_diagonal():
    """diag(-2, -1, 0): |M_n| = 2 = 2 * 1."""
    step = corner_identity(helpers.hermitian(np.diag([-2.0, -1.0, 0.0])))
    assert step.passed
    assert step.defect == 0.0
    assert step.details["det_minor"] == 2.0
    assert step.details["det_lambda"] == 2.0
    assert step.details["u_nn_sq"] == 1.0


def test_corner_identity_shifted_exchange():
    """Exchange matrix minus I: |M_n| = -1 = -2 * 1/2."""
    step = corner_identity(shift(helpers.hermitian(helpers.EXCHANGE), 1.0))
    assert step.passed
    assert step.details["det_minor"] == pytest.approx(-1.0, abs=1e-12)
    assert step.details["det_lambda"] == pytest.approx(-2.0, abs=1e-12)
    assert step.details["u_nn_sq"] == pytest.approx(0.5, abs=1e-12)


def test_corner_identity_needs_a_kernel():
    """Unshifted matrices and repeated kernels are refused."""
    with pytest.raises(NotShifted):
        corner_identity(helpers.hermitian(np.diag([1.0, 2.0, 3.0])))

    with pytest.raises(DegenerateKernel) as e:
        corner_identity(helpers.hermitian(np.diag([0.0, 0.0, 1.0])))
    assert e.value.eigenvalue == 0.0

    with pytest.raises(TooSmall):
        corner_identity(helpers.hermitian([[0.0]]))


def test_block_factor_check():
    """The block factorization holds on shifted random matrices."""
    for a in helpers.seeded_matrices(Ensemble.COMPLEX_HERMITIAN, 10):
        step = block_factor_check(reduce_to_zero(a, a.n // 2))
        assert step.passed
        assert step.tolerance == 1e-9 * a.n
        assert list(step.details) == ["m_n_defect", "b_defect", "a_nn_defect"]


def test_unitarity_block_check():
    """Every eigh unitary and every random unitary passes all four relations."""
    for a in helpers.seeded_matrices(Ensemble.REAL_SYMMETRIC, 10):
        assert unitarity_block_check(eigh(a).vectors).passed
    for n in range(2, 12):
        step = unitarity_block_check(random_unitary(n, seed=n))
        assert step.passed
        assert step.details["row_norm_defect"] <= 1e-10 * n


def test_unitarity_block_check_rejects():
    """Non-unitary and too small inputs."""
    with pytest.raises(NotUnitary):
        unitarity_block_check(2 * np.eye(3))
    with pytest.raises(TooSmall):
        unitarity_block_check(np.eye(1))


def test_sylvester_on_eigh_columns():
    """The last column of an eigh unitary satisfies the Sylvester step."""
    for a in helpers.seeded_matrices(Ensemble.COMPLEX_HERMITIAN, 10):
        u = eigh(a).vectors
        assert sylvester_check(u[:-1, -1], u[-1, -1]).passed


@pytest.mark.parametrize("seed", range(100))
def test_sylvester_on_random_columns(seed):
    """det(I - c c^H) = 1 - c^H c for any column of norm at most 1."""
    rng = np.random.default_rng(seed)
    length = 1 + seed % 31
    c = rng.standard_normal(length) + 1j * rng.standard_normal(length)
    c *= rng.uniform(0.0, 1.0) / np.linalg.norm(c)
    u_nn = np.sqrt(1.0 - np.vdot(c, c).real)

    step = sylvester_check(c, u_nn, tol=1e-10 * (length + 1))
    assert step.passed


def test_sylvester_needs_normalization():
    """Without C1^H C1 + |u_nn|^2 = 1 the step has no premise."""
    with pytest.raises(NormalizationViolated):
        sylvester_check([0.5], 0.5)


@pytest.mark.parametrize("seed", range(50))
def test_full_proof_trace(seed):
    """Every step passes for every simple eigenvalue."""
    ensemble = Ensemble.REAL_SYMMETRIC if seed % 2 else Ensemble.COMPLEX_HERMITIAN
    a = random_hermitian(2 + seed % 7, seed, ensemble=ensemble)
    assert gap_analysis(spectrum(a)).simple

    for i in range(a.n):
        trace = full_proof_trace(a, i)
        assert [step.name for step in trace.steps] == BASE_STEPS
        assert trace.passed, f"i={i}: {trace.steps}"
        assert trace.i == i
        assert trace.j == i


def test_full_proof_trace_other_component():
    """Component j is moved last before the proof runs."""
    a = random_hermitian(5, 3, ensemble=Ensemble.COMPLEX_HERMITIAN)
    for j in range(5):
        trace = full_proof_trace(a, 2, j)
        assert trace.passed
        assert trace.j == j
        assert trace.eigenvalue == spectrum(a)[2]


def test_full_proof_trace_extended():
    """Extended traces add the determinant and the reduction form steps."""
    a = random_hermitian(6, 8, ensemble=Ensemble.REAL_SYMMETRIC)
    trace = full_proof_trace(a, 0, extended=True)
    assert [step.name for step in trace.steps] == BASE_STEPS + [
        "determinant_spectrum_check",
        "reduction_form_check",
    ]
    assert trace.passed
    assert trace.step("reduction_form_check").details["component"] == 0

    with pytest.raises(KeyError):
        trace.step("missing")


def test_full_proof_trace_errors():
    """Repeated eigenvalues, bad indices and 1 x 1 matrices."""
    a = random_hermitian(
        3, 1, ensemble=Ensemble.PRESCRIBED_SPECTRUM, spectrum=[1.0, 1.0, 2.0]
    )
    with pytest.raises(DegenerateKernel):
        full_proof_trace(a, 0)
    assert full_proof_trace(a, 2).passed

    with pytest.raises(IndexOutOfRange):
        full_proof_trace(a, 3)
    with pytest.raises(IndexOutOfRange):
        full_proof_trace(a, 0, -1)
    with pytest.raises(TooSmall):
        full_proof_trace(helpers.hermitian([[1.0]]), 0)


def test_corner_defect_matches_identity_cell():
    """The corner identity is the (i, n) cell of the identity on the shifted matrix."""
    for a in helpers.seeded_matrices(Ensemble.COMPLEX_HERMITIAN, 10):
        i = a.n - 1
        shifted = reduce_to_zero(a, i)
        corner = corner_identity(shifted)
        cell = verify_identity(shifted).cell(i, a.n - 1)

        assert corner.defect <= 1e-8
        assert abs(corner.defect - cell.normalized_gap) <= 1e-8


def test_reduction_form():
    """First reduction form on a diagonal and on shifted random matrices."""
    assert reduction_form_check(helpers.hermitian(np.diag([-2.0, -1.0, 0.0]))).passed

    for a in helpers.seeded_matrices(Ensemble.REAL_SYMMETRIC, 10):
        shifted = reduce_to_zero(a, 0)
        for j in range(a.n):
            assert reduction_form_check(shifted, j).passed

    with pytest.raises(IndexOutOfRange):
        reduction_form_check(shifted, a.n)


@given(st.integers(min_value=2, max_value=10), st.integers(min_value=0, max_value=2**32))
@settings(max_examples=30, deadline=None)
def test_permutation_keeps_matrix_trace(n, seed):
    """P A P' has the same matrix trace, and M_n of it is M_j of A."""
    a = random_hermitian(n, seed, ensemble=Ensemble.COMPLEX_HERMITIAN)
    j = seed % n
    order = list(range(n))
    order[j], order[-1] = n - 1, j
    p = symmetric_permutation(a, order)

    assert abs(np.trace(p.entries) - np.trace(a.entries)) <= 1e-10
    if j == n - 1:
        assert p == a
    else:
        minor = principal_minor(p, n - 1).entries
        expected = principal_minor(a, j).entries
        assert np.array_equal(
            np.sort(minor.diagonal().real), np.sort(expected.diagonal().real)
        )


@pytest.mark.parametrize("seed", range(6))
def test_proof_steps_do_not_depend_on_the_permutation(seed):
    """Moving component j last by another permutation gives the same step defects."""
    a = random_hermitian(3 + seed, seed, ensemble=Ensemble.COMPLEX_HERMITIAN)
    n = a.n

    for i in range(n):
        for j in {0, n // 2}:
            # full_proof_trace swaps j with the last index, this rotates it there.
            order = [k for k in range(n) if k != j] + [j]
            direct = full_proof_trace(a, i, j)
            permuted = full_proof_trace(symmetric_permutation(a, order), i, n - 1)

            assert [s.name for s in direct.steps] == [s.name for s in permuted.steps]
            for first, second in zip(direct.steps, permuted.steps):
                assert abs(first.defect - second.defect) <= 1e-10
            assert abs(direct.eigenvalue - permuted.eigenvalue) <= 1e-10
