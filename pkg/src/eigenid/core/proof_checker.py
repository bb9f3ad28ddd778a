"""Numerical checks of the block matrix proof of |M_n| = |Lambda_n| |u_nn|^2.

A is shifted so that lambda_i becomes (numerically) zero, then the eigenvector
unitary is reordered so that the kernel vector is its last column and split along
its last row and column. Every step of the proof becomes a ProofStep that measures
how far the computed blocks are from the algebraic relation they should satisfy.
"""

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from ..constants import (
    BLOCK_TOL_PER_ORDER,
    GAP_TOL,
    IDENTITY_TOL,
    PIVOT_UNDERFLOW,
    SYLVESTER_TOL,
    UNITARY_TOL_PER_ORDER,
    ZERO_EIGENVALUE_TOL,
)
from ..helper_functions import EigenidError, normalized_gap, ordered_product
from .eigen_solver import eigh, spectrum
from .matrix_core import (
    BadShape,
    HermitianMatrix,
    IndexOutOfRange,
    TooSmall,
    corner_partition,
    principal_minor,
    shift,
    symmetric_permutation,
)


class NotShifted(EigenidError):
    """The matrix has no eigenvalue close enough to zero."""


class DegenerateKernel(EigenidError):
    """The kernel eigenvalue is repeated, the corner form degenerates."""

    def __init__(self, msg: str, eigenvalue: float):
        super().__init__(msg)
        self.eigenvalue = eigenvalue


class NotUnitary(EigenidError):
    """Input of the unitarity checks is not unitary."""


class NormalizationViolated(EigenidError):
    """C1^H C1 + |u_nn|^2 is not 1, the Sylvester step has no premise."""


@dataclass(frozen=True)
class ProofStep:
    """One verified step of the proof.

    details keeps the measured quantities in the order they were computed.
    """

    name: str
    defect: float
    tolerance: float
    passed: bool
    details: Dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class ProofTrace:
    """Ordered proof steps for eigenvalue index i and component index j (0-based)."""

    i: int
    j: int
    eigenvalue: float
    steps: Tuple[ProofStep, ...]

    @property
    def passed(self) -> bool:
        """True iff every step passed."""
        return all(step.passed for step in self.steps)

    def step(self, name: str) -> ProofStep:
        """Return the step called name."""
        for step in self.steps:
            if step.name == name:
                return step
        raise KeyError(name)


def _make_step(name: str, defect: float, tolerance: float, **details) -> ProofStep:
    return ProofStep(
        name=name,
        defect=float(defect),
        tolerance=float(tolerance),
        passed=bool(defect <= tolerance),
        details={key: float(value) for key, value in details.items()},
    )


def determinant(m) -> complex:
    """Determinant by Gaussian elimination with partial pivoting.

    The row with the largest pivot magnitude is swapped in at every step and each
    swap flips the sign. A pivot below 1e-300 in magnitude makes the result exactly
    zero, a 0 x 0 grid has determinant 1.

    Raises:
        BadShape for a non-square grid.
    """
    if isinstance(m, HermitianMatrix):
        m = m.entries
    grid = np.array(m, dtype=complex)
    if grid.ndim != 2 or grid.shape[0] != grid.shape[1]:
        raise BadShape(f"determinant needs a square grid, got shape {grid.shape}")

    n = grid.shape[0]
    det = 1.0 + 0.0j
    for k in range(n):
        p = k + int(np.argmax(np.abs(grid[k:, k])))
        pivot = grid[p, k]
        if abs(pivot) < PIVOT_UNDERFLOW:
            return 0j

        if p != k:
            grid[[k, p]] = grid[[p, k]]
            det = -det
        det *= pivot

        grid[k + 1 :, k:] -= np.outer(grid[k + 1 :, k] / pivot, grid[k, k:])

    return complex(det)


def reduce_to_zero(a: HermitianMatrix, i: int) -> HermitianMatrix:
    """Shift A by its own eigenvalue lambda_i, making it a kernel eigenvalue."""
    if not 0 <= i < a.n:
        raise IndexOutOfRange(f"eigenvalue index {i} outside of [0, {a.n - 1}]")
    return shift(a, spectrum(a)[i])


def _check_simple(lam: np.ndarray, k: int, gap_tol: float):
    threshold = gap_tol * (1.0 + float(lam[-1] - lam[0]))
    others = np.delete(lam, k)
    if others.size and float(np.min(np.abs(others - lam[k]))) <= threshold:
        raise DegenerateKernel(
            f"eigenvalue {lam[k]!r} is repeated within {threshold!r}", float(lam[k])
        )


@dataclass(frozen=True, eq=False)
class _KernelFrame:
    """Eigenvalues and eigenvectors of A reordered so the kernel comes last."""

    lam: np.ndarray
    u: np.ndarray

    @property
    def kernel_value(self) -> float:
        """Eigenvalue of the kernel vector, zero up to rounding."""
        return float(self.lam[-1])

    @property
    def remaining(self) -> np.ndarray:
        """Lambda_n, the eigenvalues of the other columns."""
        return self.lam[:-1]


def _kernel_frame(a: HermitianMatrix, gap_tol: float = GAP_TOL) -> _KernelFrame:
    if a.n < 2:
        raise TooSmall("the corner form needs a matrix of order 2 or more")

    decomposition = eigh(a)
    lam = decomposition.eigenvalues
    z = int(np.argmin(np.abs(lam)))

    limit = ZERO_EIGENVALUE_TOL * (1.0 + float(np.max(np.abs(lam))))
    if abs(lam[z]) > limit:
        raise NotShifted(
            f"smallest eigenvalue magnitude is {abs(lam[z])!r}, needs to be at most "
            f"{limit!r}, shift the matrix first"
        )
    _check_simple(lam, z, gap_tol)

    order = [k for k in range(a.n) if k != z] + [z]
    return _KernelFrame(lam=lam[order], u=decomposition.vectors[:, order])


def _corner_step(a: HermitianMatrix, frame: _KernelFrame, tol: float) -> ProofStep:
    det_minor = determinant(a.entries[:-1, :-1]).real
    det_lambda = ordered_product(frame.remaining)
    u_nn_sq = abs(frame.u[-1, -1]) ** 2
    rhs = det_lambda * u_nn_sq

    return _make_step(
        "corner_identity",
        normalized_gap(det_minor, rhs),
        tol,
        det_minor=det_minor,
        det_lambda=det_lambda,
        u_nn_sq=u_nn_sq,
        kernel_eigenvalue=frame.kernel_value,
    )


def corner_identity(a: HermitianMatrix, tol: float = IDENTITY_TOL) -> ProofStep:
    """Compare |M_n| with |Lambda_n| |u_nn|^2 on a matrix with a simple zero eigenvalue.

    The kernel eigenvalue is the one of smallest magnitude. |Lambda_n| is the product
    of the other eigenvalues and u_nn the last component of the kernel vector.

    Raises:
        NotShifted, DegenerateKernel, TooSmall
    """
    return _corner_step(a, _kernel_frame(a), tol)


def _block_step(
    a: HermitianMatrix, frame: _KernelFrame, tol: Optional[float]
) -> ProofStep:
    if tol is None:
        tol = BLOCK_TOL_PER_ORDER * a.n

    blocks = corner_partition(a)
    unitary = corner_partition(frame.u)
    lam_n = frame.remaining
    u_n, c2 = unitary.top_left, unitary.bottom_left_row

    m_n = (u_n * lam_n[None, :]) @ u_n.conj().T
    b = (u_n * lam_n[None, :]) @ c2.conj()
    a_nn = np.sum(lam_n * np.abs(c2) ** 2)

    scale = 1.0 + a.max_abs_entry()
    m_n_defect = float(np.max(np.abs(m_n - blocks.top_left))) / scale
    b_defect = float(np.max(np.abs(b - blocks.top_right_col))) / scale
    a_nn_defect = abs(a_nn - blocks.corner) / scale

    return _make_step(
        "block_factor_check",
        max(m_n_defect, b_defect, a_nn_defect),
        tol,
        m_n_defect=m_n_defect,
        b_defect=b_defect,
        a_nn_defect=a_nn_defect,
    )


def block_factor_check(a: HermitianMatrix, tol: Optional[float] = None) -> ProofStep:
    """Check M_n = U_n Lambda_n U_n^H, B = U_n Lambda_n C2^H and a_nn = C2 Lambda_n C2^H.

    U comes from eigh with the kernel column moved last. Defects are entrywise
    maxima relative to 1 + max |a|, the default tolerance is 1e-9 n.

    Raises:
        NotShifted, DegenerateKernel, TooSmall
    """
    return _block_step(a, _kernel_frame(a), tol)


def unitarity_block_check(u, tol: Optional[float] = None) -> ProofStep:
    """Check the block relations that follow from U^H U = I.

    With U split into U_n, C1, C2 and u_nn:
        U_n U_n^H + C1 C1^H = I
        C1^H C1 + |u_nn|^2 = 1
        U_n C2^H + C1 conj(u_nn) = 0
        C2 C2^H + |u_nn|^2 = 1

    Raises:
        NotUnitary if |U^H U - I| > 1e-10 n, TooSmall, BadShape
    """
    parts = corner_partition(u)
    n = parts.n
    if tol is None:
        tol = UNITARY_TOL_PER_ORDER * n

    grid = parts.reassemble()
    unitarity_defect = float(np.max(np.abs(grid.conj().T @ grid - np.eye(n))))
    if unitarity_defect > UNITARY_TOL_PER_ORDER * n:
        raise NotUnitary(f"max |U^H U - I| is {unitarity_defect!r}")

    u_n, c1 = parts.top_left, parts.top_right_col
    c2, u_nn = parts.bottom_left_row, parts.corner
    u_nn_sq = abs(u_nn) ** 2

    rows_defect = float(
        np.max(np.abs(u_n @ u_n.conj().T + np.outer(c1, c1.conj()) - np.eye(n - 1)))
    )
    column_norm_defect = abs(np.real(np.vdot(c1, c1)) + u_nn_sq - 1.0)
    cross_defect = float(np.max(np.abs(u_n @ c2.conj() + c1 * np.conj(u_nn))))
    row_norm_defect = abs(np.real(np.vdot(c2, c2)) + u_nn_sq - 1.0)

    return _make_step(
        "unitarity_block_check",
        max(rows_defect, column_norm_defect, cross_defect, row_norm_defect),
        tol,
        rows_defect=rows_defect,
        column_norm_defect=column_norm_defect,
        cross_defect=cross_defect,
        row_norm_defect=row_norm_defect,
    )


def sylvester_check(c1, u_nn: complex, tol: float = SYLVESTER_TOL) -> ProofStep:
    """Check det(I - C1 C1^H) = 1 - C1^H C1 = |u_nn|^2.

    Raises:
        NormalizationViolated when |C1^H C1 + |u_nn|^2 - 1| > tol.
    """
    c1 = np.asarray(c1, dtype=complex).ravel()
    norm_sq = float(np.real(np.vdot(c1, c1)))
    u_nn_sq = abs(u_nn) ** 2

    premise = abs(norm_sq + u_nn_sq - 1.0)
    if premise > tol:
        raise NormalizationViolated(f"|C1^H C1 + |u_nn|^2 - 1| is {premise!r}")

    det_sylvester = determinant(np.eye(c1.size) - np.outer(c1, c1.conj())).real
    one_minus = 1.0 - norm_sq

    return _make_step(
        "sylvester_check",
        max(
            abs(det_sylvester - one_minus),
            abs(det_sylvester - u_nn_sq),
            abs(one_minus - u_nn_sq),
        ),
        tol,
        det_sylvester=det_sylvester,
        one_minus_norm=one_minus,
        u_nn_sq=u_nn_sq,
    )


def determinant_spectrum_check(
    m: HermitianMatrix, tol: float = IDENTITY_TOL
) -> ProofStep:
    """Compare the determinant of M with the product of its eigenvalues."""
    det = determinant(m).real
    product = ordered_product(spectrum(m))

    scale = max(abs(det), abs(product))
    defect = abs(det - product) / scale if scale > 0.0 else 0.0

    return _make_step(
        "determinant_spectrum_check",
        defect,
        tol,
        determinant=det,
        eigenvalue_product=product,
    )


def _reduction_step(
    a: HermitianMatrix, frame: _KernelFrame, j: int, tol: float
) -> ProofStep:
    if not 0 <= j < a.n:
        raise IndexOutOfRange(f"component index {j} outside of [0, {a.n - 1}]")

    v_sq = abs(frame.u[j, -1]) ** 2
    lhs = v_sq * ordered_product(frame.remaining)
    rhs = ordered_product(spectrum(principal_minor(a, j)))

    return _make_step(
        "reduction_form_check",
        normalized_gap(lhs, rhs),
        tol,
        component=j,
        v_sq=v_sq,
        lhs=lhs,
        rhs=rhs,
    )


def reduction_form_check(
    a: HermitianMatrix, j: int = 0, tol: float = IDENTITY_TOL
) -> ProofStep:
    """Check |v_zj|^2 prod_{k != z} lambda_k = prod lambda_k(M_j) on a shifted matrix.

    Raises:
        NotShifted, DegenerateKernel, IndexOutOfRange, TooSmall
    """
    return _reduction_step(a, _kernel_frame(a), j, tol)


def full_proof_trace(
    a: HermitianMatrix,
    i: int,
    j: Optional[int] = None,
    tol: float = IDENTITY_TOL,
    extended: bool = False,
    unitary_tol: Optional[float] = None,
    block_tol: Optional[float] = None,
    gap_tol: float = GAP_TOL,
) -> ProofTrace:
    """Run every proof step for eigenvalue i and component j of A.

    Component j (default i) is moved to the last position by a symmetric
    transposition, then the matrix is shifted by lambda_i. The corner identity, the
    block factorization, the unitarity relations and the Sylvester step then run in
    this order. extended adds the determinant/spectrum agreement on M_n and the
    reduction form at component 0. lambda_i counts as simple when no other eigenvalue
    lies within gap_tol * (1 + range) of it.

    Raises:
        DegenerateKernel when lambda_i is not simple, TooSmall, IndexOutOfRange
    """
    if a.n < 2:
        raise TooSmall("a proof trace needs a matrix of order 2 or more")
    if j is None:
        j = i
    for name, index in (("eigenvalue", i), ("component", j)):
        if not 0 <= index < a.n:
            raise IndexOutOfRange(f"{name} index {index} outside of [0, {a.n - 1}]")

    lam = spectrum(a)
    _check_simple(lam, i, gap_tol)

    last = a.n - 1
    if j != last:
        order = list(range(a.n))
        order[j], order[last] = last, j
        a = symmetric_permutation(a, order)

    shifted = reduce_to_zero(a, i)
    frame = _kernel_frame(shifted, gap_tol)
    unitary = corner_partition(frame.u)

    steps = [
        _corner_step(shifted, frame, tol),
        _block_step(shifted, frame, block_tol),
        unitarity_block_check(frame.u, unitary_tol),
        sylvester_check(unitary.top_right_col, unitary.corner),
    ]
    if extended:
        steps.append(determinant_spectrum_check(principal_minor(shifted, last), tol))
        steps.append(_reduction_step(shifted, frame, 0, tol))

    return ProofTrace(i=i, j=j, eigenvalue=float(lam[i]), steps=tuple(steps))
