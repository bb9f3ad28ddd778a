import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from ..constants import (
    GAP_TOL,
    IDENTITY_TOL,
    INTERLACING_SLACK,
    MAGNITUDE_CLAMP,
    STOCHASTIC_TOL_PER_ORDER,
)
from ..helper_functions import EigenidError, normalized_gap, ordered_product
from .eigen_solver import EigenDecomposition, NoConvergence, eigh, spectrum
from .matrix_core import HermitianMatrix, TooSmall, principal_minor


class DimensionMismatch(EigenidError):
    """Spectra, magnitudes and indices do not describe the same matrix."""


class NonFiniteProduct(EigenidError):
    """A side of the identity overflowed."""


class EmptySpectrum(EigenidError):
    """Gap analysis of an empty eigenvalue sequence."""


class LengthMismatch(EigenidError):
    """A minor spectrum must be exactly one shorter than the full spectrum."""


class InvalidMagnitudes(EigenidError):
    """Reconstructed magnitudes are outside of [0, 1] or not doubly stochastic."""


@dataclass(frozen=True)
class SpectralGapInfo:
    """Smallest distance between eigenvalues and whether the spectrum is simple.

    closest_pair holds the 0-based indices of the two eigenvalues that are closest,
    None for a single eigenvalue.
    """

    min_gap: float
    spectral_range: float
    simple: bool
    closest_pair: Optional[Tuple[int, int]] = None


class DegenerateSpectrum(EigenidError):
    """The spectrum is not simple, the identity carries no per-entry information."""

    def __init__(self, msg: str, gap_info: SpectralGapInfo):
        super().__init__(msg)
        self.gap_info = gap_info


@dataclass(frozen=True, eq=False)
class MinorSpectra:
    """Ascending spectra of the n principal minors M_0 ... M_n-1."""

    order: int
    spectra: Tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.spectra) != self.order:
            raise DimensionMismatch(
                f"expected {self.order} minor spectra, got {len(self.spectra)}"
            )
        for j, mu in enumerate(self.spectra):
            if len(mu) != self.order - 1:
                raise DimensionMismatch(
                    f"minor {j} has {len(mu)} eigenvalues, expected {self.order - 1}"
                )


@dataclass(frozen=True)
class IdentityCell:
    """Both sides of the identity for eigenvalue i and component j."""

    i: int
    j: int
    lhs: float
    rhs: float
    abs_gap: float
    normalized_gap: float


@dataclass(frozen=True)
class IdentityReport:
    """Result of checking the identity on every (i, j) cell of a matrix."""

    order: int
    cells: Tuple[IdentityCell, ...]
    tolerance: float

    @property
    def worst(self) -> IdentityCell:
        """Cell with the largest normalized gap, the first one on ties."""
        return max(self.cells, key=lambda cell: cell.normalized_gap)

    @property
    def max_gap(self) -> float:
        """Largest normalized gap over all cells."""
        return self.worst.normalized_gap

    @property
    def passed(self) -> bool:
        """True iff every cell is within the tolerance."""
        return self.max_gap <= self.tolerance

    def cell(self, i: int, j: int) -> IdentityCell:
        """Return the cell of eigenvalue i and component j."""
        return self.cells[i * self.order + j]


@dataclass(frozen=True, eq=False)
class MagnitudeMatrix:
    """Grid of |v_ij|^2, row i belongs to eigenvalue i, column j to component j.

    Entries within MAGNITUDE_CLAMP below zero or above one are clamped into [0, 1].
    Anything further out, or row and column sums away from 1, raise InvalidMagnitudes.
    """

    order: int
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float, copy=True)
        if values.shape != (self.order, self.order):
            raise DimensionMismatch(
                f"magnitudes have shape {values.shape}, expected order {self.order}"
            )

        lowest = float(values.min())
        if lowest < -MAGNITUDE_CLAMP:
            raise InvalidMagnitudes(f"reconstructed magnitude {lowest!r} is negative")
        highest = float(values.max())
        if highest > 1.0 + MAGNITUDE_CLAMP:
            raise InvalidMagnitudes(f"reconstructed magnitude {highest!r} exceeds 1")
        values[values <= 0.0] = 0.0
        values[values > 1.0] = 1.0

        limit = STOCHASTIC_TOL_PER_ORDER * self.order
        sums = np.concatenate([values.sum(axis=1), values.sum(axis=0)])
        worst = float(np.max(np.abs(sums - 1.0)))
        if worst > limit:
            raise InvalidMagnitudes(
                f"row or column sum is off from 1 by {worst!r}, allowed is {limit!r}"
            )

        values.setflags(write=False)
        object.__setattr__(self, "values", values)


@dataclass(frozen=True)
class InterlacingResult:
    """Outcome of an interlacing check, violation_index is the first failing k."""

    passed: bool
    violation_index: Optional[int] = None


def _solve_minor(a: HermitianMatrix, j: int) -> np.ndarray:
    try:
        return spectrum(principal_minor(a, j))
    except NoConvergence as e:
        raise NoConvergence(f"minor {j}: {e}", minor_index=j) from e


def minor_spectra(a: HermitianMatrix, workers: int = 1) -> MinorSpectra:
    """Solve the n principal minors of A.

    Args:
        a ():               Matrix of order 2 or more.
        workers (int):      Threads for the independent minor eigenproblems. The
                            result does not depend on it.

    Raises:
        TooSmall, NoConvergence (with minor_index set)
    """
    if a.n < 2:
        raise TooSmall("minor spectra need a matrix of order 2 or more")

    indices = range(a.n)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            spectra = list(pool.map(lambda j: _solve_minor(a, j), indices))
    else:
        spectra = [_solve_minor(a, j) for j in indices]

    return MinorSpectra(order=a.n, spectra=tuple(spectra))


def eigenvector_magnitudes(decomposition: EigenDecomposition) -> np.ndarray:
    """Return mags with mags[i][j] = |component j of v_i|^2."""
    if decomposition.vectors is None:
        raise DimensionMismatch("decomposition has no eigenvectors")
    return (np.abs(decomposition.vectors) ** 2).T


def identity_sides(
    lam: Sequence[float], minors: MinorSpectra, mags, i: int, j: int
) -> Tuple[float, float]:
    """Evaluate both sides of the eigenvector-eigenvalue identity.

    lhs = mags[i][j] * prod_{k != i} (lam_i - lam_k)
    rhs = prod_k (lam_i - mu_k(M_j))

    Args:
        lam ():         Ascending spectrum of A.
        minors ():      Minor spectra of A.
        mags ():        n x n grid of |v_ij|^2 from a decomposition of A.
        i (int):        Eigenvalue index, 0-based.
        j (int):        Component index, 0-based.

    Raises:
        DimensionMismatch, NonFiniteProduct
    """
    lam = np.asarray(lam, dtype=float)
    mags = np.asarray(mags, dtype=float)
    n = lam.shape[0]

    if minors.order != n or mags.shape != (n, n):
        raise DimensionMismatch(
            f"spectrum of length {n}, minors of order {minors.order} and magnitudes of "
            f"shape {mags.shape} do not match"
        )
    if not (0 <= i < n and 0 <= j < n):
        raise DimensionMismatch(f"cell ({i}, {j}) outside of a matrix of order {n}")

    lhs = float(mags[i, j]) * ordered_product(np.delete(lam[i] - lam, i))
    rhs = ordered_product(lam[i] - minors.spectra[j])

    if not (math.isfinite(lhs) and math.isfinite(rhs)):
        raise NonFiniteProduct(f"cell ({i}, {j}) overflowed: lhs {lhs}, rhs {rhs}")

    return lhs, rhs


def verify_identity(
    a: HermitianMatrix, tol: float = IDENTITY_TOL, workers: int = 1
) -> IdentityReport:
    """Check the identity on all n^2 cells of A.

    The eigendecomposition supplies the left side, the minor spectra the right side.
    Cells are assembled row-major, so the report does not depend on workers.

    Raises:
        TooSmall, NoConvergence
    """
    decomposition = eigh(a)
    minors = minor_spectra(a, workers=workers)
    mags = eigenvector_magnitudes(decomposition)
    lam = decomposition.eigenvalues

    cells = []
    for i in range(a.n):
        for j in range(a.n):
            lhs, rhs = identity_sides(lam, minors, mags, i, j)
            cells.append(
                IdentityCell(
                    i=i,
                    j=j,
                    lhs=lhs,
                    rhs=rhs,
                    abs_gap=abs(lhs - rhs),
                    normalized_gap=normalized_gap(lhs, rhs),
                )
            )

    return IdentityReport(order=a.n, cells=tuple(cells), tolerance=tol)


def gap_analysis(lam: Sequence[float], gap_tol: float = GAP_TOL) -> SpectralGapInfo:
    """Smallest eigenvalue gap of an ascending sequence.

    The spectrum is simple when min_gap > gap_tol * (1 + range).

    Raises:
        EmptySpectrum
    """
    lam = np.asarray(lam, dtype=float)
    if lam.size == 0:
        raise EmptySpectrum("spectrum has no eigenvalues")

    spectral_range = float(lam[-1] - lam[0])
    if lam.size == 1:
        return SpectralGapInfo(math.inf, spectral_range, True, None)

    gaps = np.diff(lam)
    k = int(np.argmin(gaps))
    min_gap = max(float(gaps[k]), 0.0)
    simple = min_gap > gap_tol * (1.0 + spectral_range)

    return SpectralGapInfo(min_gap, spectral_range, simple, (k, k + 1))


def reconstruct_magnitudes(
    lam: Sequence[float], minors: MinorSpectra, gap_tol: float = GAP_TOL
) -> MagnitudeMatrix:
    """Rebuild every |v_ij|^2 from the spectra of A and its minors alone.

    |v_ij|^2 = prod_k (lam_i - mu_k(M_j)) / prod_{k != i} (lam_i - lam_k)

    Raises:
        DegenerateSpectrum, DimensionMismatch, InvalidMagnitudes
    """
    lam = np.asarray(lam, dtype=float)
    n = lam.shape[0]
    if minors.order != n:
        raise DimensionMismatch(
            f"spectrum of length {n} and minors of order {minors.order} do not match"
        )

    info = gap_analysis(lam, gap_tol)
    if not info.simple:
        raise DegenerateSpectrum(
            f"smallest eigenvalue gap {info.min_gap!r} is not above "
            f"{gap_tol!r} * (1 + {info.spectral_range!r})",
            info,
        )

    values = np.empty((n, n))
    for i in range(n):
        denominator = ordered_product(np.delete(lam[i] - lam, i))
        for j in range(n):
            values[i, j] = ordered_product(lam[i] - minors.spectra[j]) / denominator

    return MagnitudeMatrix(order=n, values=values)


def magnitude_deviation(a, b) -> float:
    """Max entrywise distance between two magnitude grids."""
    a = a.values if isinstance(a, MagnitudeMatrix) else np.asarray(a, dtype=float)
    b = b.values if isinstance(b, MagnitudeMatrix) else np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} differ")
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - b)))


def interlacing_check(
    lam: Sequence[float], minor: Sequence[float], slack: float = INTERLACING_SLACK
) -> InterlacingResult:
    """Check lam_k - slack <= mu_k <= lam_k+1 + slack for every k.

    Raises:
        LengthMismatch
    """
    lam = np.asarray(lam, dtype=float)
    mu = np.asarray(minor, dtype=float)
    if mu.shape[0] != lam.shape[0] - 1:
        raise LengthMismatch(
            f"minor spectrum has {mu.shape[0]} values, expected {lam.shape[0] - 1}"
        )

    for k, value in enumerate(mu):
        if not (lam[k] - slack <= value <= lam[k + 1] + slack):
            return InterlacingResult(False, k)

    return InterlacingResult(True, None)
