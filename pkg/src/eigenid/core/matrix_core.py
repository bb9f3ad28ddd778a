from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from ..constants import HERMITIAN_TOL
from ..helper_functions import EigenidError


class BadShape(EigenidError):
    """Input grid is not square, or does not have the expected order."""


class NotHermitian(EigenidError):
    """Strict mode found an asymmetry above the Hermitian tolerance."""


class IndexOutOfRange(EigenidError):
    """Row, column or eigenvalue index outside of the matrix."""


class TooSmall(EigenidError):
    """Operation needs a matrix of order 2 or more."""


class BadSpectrumLength(EigenidError):
    """Prescribed spectrum is missing, misplaced or of the wrong length."""


class Ensemble(str, Enum):
    """Random matrix ensembles understood by random_hermitian."""

    REAL_SYMMETRIC = "real_symmetric"
    COMPLEX_HERMITIAN = "complex_hermitian"
    PRESCRIBED_SPECTRUM = "prescribed_spectrum"


def _as_square(entries, what: str = "matrix") -> np.ndarray:
    """Return entries as a complex 2D array, raise BadShape if it is not square."""
    try:
        grid = np.array(entries, dtype=complex)
    except (TypeError, ValueError) as e:
        raise BadShape(f"{what} is not a rectangular grid of numbers: {e}")

    if grid.ndim != 2 or grid.shape[0] != grid.shape[1]:
        raise BadShape(f"{what} must be square, got shape {grid.shape}")

    return grid


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class HermitianMatrix:
    """Dense n x n complex matrix equal to its conjugate transpose.

    The entries are stored in a read-only complex128 array. Direct construction only
    accepts grids that are already exactly Hermitian, use from_entries() for anything
    read from the outside world.
    """

    entries: np.ndarray

    def __post_init__(self):
        grid = _as_square(self.entries)
        if grid.shape[0] < 1:
            raise BadShape("matrix must have order 1 or more")

        if not np.array_equal(grid, grid.conj().T):
            raise NotHermitian(
                "entries are not exactly Hermitian, use from_entries() to validate or "
                "symmetrize them"
            )

        object.__setattr__(self, "entries", _frozen(grid))

    @property
    def n(self) -> int:
        """Order of the matrix."""
        return self.entries.shape[0]

    def max_abs_entry(self) -> float:
        """Largest entry magnitude."""
        return float(np.max(np.abs(self.entries)))

    def __eq__(self, other):
        if not isinstance(other, HermitianMatrix):
            return NotImplemented
        return np.array_equal(self.entries, other.entries)


def hermitian_defect(grid: np.ndarray) -> float:
    """Max entrywise |e_ij - conj(e_ji)| of a square grid."""
    if grid.size == 0:
        return 0.0
    return float(np.max(np.abs(grid - grid.conj().T)))


def from_entries(n: int, entries, mode: str = "strict") -> HermitianMatrix:
    """Build a HermitianMatrix from an n x n grid of complex numbers.

    Args:
        n (int):        Expected order.
        entries ():     Anything numpy can turn into an n x n complex array.
        mode (str):     "strict" rejects grids whose asymmetry exceeds
                        1e-12 * (1 + max entry magnitude), "symmetrize" accepts
                        everything.

    Both modes return (E + E^H) / 2 with the diagonal imaginary parts zeroed, so the
    result is exactly Hermitian and an exactly Hermitian input is returned unchanged.

    Raises:
        BadShape, NotHermitian
    """
    if mode not in ("strict", "symmetrize"):
        raise ValueError(f"unknown mode '{mode}'")

    grid = _as_square(entries)
    if n < 1 or grid.shape[0] != n:
        raise BadShape(f"expected a {n} x {n} grid, got shape {grid.shape}")

    if not np.all(np.isfinite(grid)):
        raise BadShape("entries must be finite")

    if mode == "strict":
        defect = hermitian_defect(grid)
        limit = HERMITIAN_TOL * (1.0 + float(np.max(np.abs(grid))))
        if defect > limit:
            raise NotHermitian(
                f"max |e_ij - conj(e_ji)| is {defect!r}, allowed is {limit!r}"
            )

    if np.array_equal(grid, grid.conj().T):
        symmetric = grid.copy()
    else:
        symmetric = grid / 2 + grid.conj().T / 2
    np.fill_diagonal(symmetric, symmetric.diagonal().real)

    return HermitianMatrix(symmetric)


def principal_minor(a: HermitianMatrix, j: int) -> HermitianMatrix:
    """Return M_j, the matrix without row j and column j (0-based j)."""
    if a.n < 2:
        raise TooSmall("a 1 x 1 matrix has no principal minor of order n - 1")
    if not 0 <= j < a.n:
        raise IndexOutOfRange(f"index {j} outside of [0, {a.n - 1}]")

    keep = [k for k in range(a.n) if k != j]
    return HermitianMatrix(a.entries[np.ix_(keep, keep)])


@dataclass(frozen=True, eq=False)
class BlockPartition:
    """Corner split of a square grid into the blocks (top_left | col ; row | corner).

    Sourced from a Hermitian matrix the blocks are M_n, B, B' and a_nn, sourced from a
    unitary they are U_n, C1, C2 and u_nn.
    """

    top_left: np.ndarray
    top_right_col: np.ndarray
    bottom_left_row: np.ndarray
    corner: complex

    @property
    def n(self) -> int:
        """Order of the partitioned grid."""
        return self.top_left.shape[0] + 1

    def reassemble(self) -> np.ndarray:
        """Glue the four blocks back into the full grid."""
        return np.block(
            [
                [self.top_left, self.top_right_col[:, None]],
                [self.bottom_left_row[None, :], np.array([[self.corner]])],
            ]
        )


def corner_partition(m) -> BlockPartition:
    """Split a square grid (or HermitianMatrix) along its last row and column."""
    if isinstance(m, HermitianMatrix):
        m = m.entries
    grid = _as_square(m)
    if grid.shape[0] < 2:
        raise TooSmall("corner partition needs a grid of order 2 or more")

    return BlockPartition(
        top_left=_frozen(grid[:-1, :-1]),
        top_right_col=_frozen(grid[:-1, -1]),
        bottom_left_row=_frozen(grid[-1, :-1]),
        corner=complex(grid[-1, -1]),
    )


def shift(a: HermitianMatrix, s: float) -> HermitianMatrix:
    """Return A - s I. Only the diagonal changes."""
    entries = np.array(a.entries, copy=True)
    entries[np.diag_indices(a.n)] -= float(s)
    return HermitianMatrix(entries)


def symmetric_permutation(a: HermitianMatrix, order: Sequence[int]) -> HermitianMatrix:
    """Return P A P' where row k of the result is row order[k] of A."""
    order = list(order)
    if sorted(order) != list(range(a.n)):
        raise IndexOutOfRange(f"{order} is not a permutation of range({a.n})")
    return HermitianMatrix(a.entries[np.ix_(order, order)])


def _standard_complex_normal(rng: np.random.Generator, n: int) -> np.ndarray:
    # Real and imaginary parts N(0, 1/2), so E|g|^2 = 1.
    return np.sqrt(0.5) * (
        rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    )


def _gram_schmidt(g: np.ndarray) -> np.ndarray:
    """Orthonormalize the columns of g by classical Gram-Schmidt, done twice."""
    n = g.shape[1]
    q = np.zeros_like(g, dtype=complex)

    for k in range(n):
        v = g[:, k].astype(complex)
        # Second pass recovers the orthogonality lost by the first one.
        for _ in range(2):
            v = v - q[:, :k] @ (q[:, :k].conj().T @ v)
        norm = np.linalg.norm(v)
        if norm == 0.0:
            raise BadShape("random matrix is rank deficient, pick another seed")
        q[:, k] = v / norm

    return q


def random_unitary(n: int, seed: int) -> np.ndarray:
    """Seeded n x n unitary from a standard complex Gaussian matrix."""
    if n < 1:
        raise BadShape("order must be 1 or more")
    rng = np.random.default_rng(seed)
    return _gram_schmidt(_standard_complex_normal(rng, n))


def random_hermitian(
    n: int,
    seed: int,
    ensemble: Ensemble = Ensemble.REAL_SYMMETRIC,
    spectrum: Optional[Sequence[float]] = None,
) -> HermitianMatrix:
    """Generate a reproducible random Hermitian matrix.

    Args:
        n (int):            Order, 1 or more.
        seed (int):         Unsigned 64-bit seed for numpy's default_rng.
        ensemble ():        Ensemble member or its string value.
        spectrum ():        Eigenvalues, required by and only allowed with
                            prescribed_spectrum.

    Returns:
        The same matrix for the same arguments.

    Raises:
        BadShape, BadSpectrumLength
    """
    ensemble = Ensemble(ensemble)
    if n < 1:
        raise BadShape("order must be 1 or more")

    if ensemble is Ensemble.PRESCRIBED_SPECTRUM:
        if spectrum is None or len(spectrum) != n:
            got = "no spectrum" if spectrum is None else f"{len(spectrum)} values"
            raise BadSpectrumLength(f"expected {n} eigenvalues, got {got}")
    elif spectrum is not None:
        raise BadSpectrumLength(f"ensemble {ensemble.value} takes no spectrum")

    if ensemble is Ensemble.REAL_SYMMETRIC:
        g = np.random.default_rng(seed).standard_normal((n, n))
        return from_entries(n, (g + g.T) / 2, mode="symmetrize")

    if ensemble is Ensemble.COMPLEX_HERMITIAN:
        g = _standard_complex_normal(np.random.default_rng(seed), n)
        return from_entries(n, (g + g.conj().T) / 2, mode="symmetrize")

    q = random_unitary(n, seed)
    lam = np.asarray(spectrum, dtype=float)
    return from_entries(n, (q * lam) @ q.conj().T, mode="symmetrize")
