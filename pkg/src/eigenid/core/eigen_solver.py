"""Dense Hermitian eigensolver.

A complex Householder reduction brings A to a real symmetric tridiagonal matrix, the
remaining phases are absorbed into the accumulated unitary, and an implicit-shift QL
iteration with Wilkinson shifts diagonalizes the tridiagonal. The iteration core is
purely real, so one kernel serves real and complex inputs alike.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..constants import MAX_QL_SWEEPS
from ..helper_functions import EigenidError
from .matrix_core import BadShape, HermitianMatrix

EPS = np.finfo(float).eps


class NoConvergence(EigenidError):
    """QL iteration exceeded its sweep budget.

    This signals pathological input or a bug, never a user error. When raised while
    solving a principal minor, minor_index holds the (0-based) deleted index.
    """

    def __init__(self, msg: str, minor_index: Optional[int] = None):
        super().__init__(msg)
        self.minor_index = minor_index


@dataclass(frozen=True, eq=False)
class Tridiagonal:
    """Real symmetric tridiagonal T together with the unitary Q, Q^H A Q = T.

    accumulated_q is None when the reduction was asked to skip it.
    """

    diag: np.ndarray
    offdiag: np.ndarray
    accumulated_q: Optional[np.ndarray] = None

    @property
    def n(self) -> int:
        """Order of the tridiagonal."""
        return self.diag.shape[0]

    def dense(self) -> np.ndarray:
        """Return T as a dense real array."""
        return (
            np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)
        )


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    """Ascending eigenvalues and, when requested, the eigenvectors as columns."""

    eigenvalues: np.ndarray
    vectors: Optional[np.ndarray] = None

    @property
    def n(self) -> int:
        """Order of the decomposed matrix."""
        return self.eigenvalues.shape[0]


@dataclass(frozen=True)
class ResidualReport:
    """Quality measurements of an eigendecomposition."""

    max_residual: float
    max_orthonormality_defect: float
    ascending: bool


def _scale_exponent(values: np.ndarray) -> int:
    """Exponent e with every |re| and |im| of values * 2^-e below 1, 0 for zeros."""
    largest = max(
        float(np.max(np.abs(np.real(values)), initial=0.0)),
        float(np.max(np.abs(np.imag(values)), initial=0.0)),
    )
    if largest == 0.0:
        return 0
    return int(np.frexp(largest)[1])


def _ldexp(values: np.ndarray, exponent: int) -> np.ndarray:
    """Multiply by 2^exponent, exact unless the result leaves the normal range."""
    if np.iscomplexobj(values):
        return np.ldexp(values.real, exponent) + 1j * np.ldexp(values.imag, exponent)
    return np.ldexp(values, exponent)


def _householder(x: np.ndarray):
    """Reflector H = I - tau v v^H with H x = alpha e_1.

    Returns (v, tau), or None when x has nothing below its first entry to annihilate.
    v is built from x scaled by a power of two, H does not depend on that scale.
    """
    if not np.any(x[1:]):
        return None

    x = _ldexp(x, -_scale_exponent(x))
    norm = np.linalg.norm(x)
    phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
    alpha = -phase * norm
    v = x.copy()
    v[0] -= alpha
    tau = 2.0 / np.real(np.vdot(v, v))

    return v, tau


def tridiagonalize(a: HermitianMatrix, accumulate: bool = True) -> Tridiagonal:
    """Reduce A to a real symmetric tridiagonal by unitary similarity.

    Args:
        a ():               Matrix to reduce.
        accumulate (bool):  Also build Q. spectrum() skips it.

    Returns:
        Tridiagonal with nonnegative off-diagonal.
    """
    n = a.n
    # Reduced at unit scale, T is scaled back exactly at the end.
    exponent = _scale_exponent(a.entries)
    work = _ldexp(np.array(a.entries, dtype=complex, copy=True), -exponent)
    q = np.eye(n, dtype=complex) if accumulate else None

    for k in range(n - 2):
        reflector = _householder(work[k + 1 :, k])
        if reflector is None:
            continue
        v, tau = reflector

        # H work H, restricted to the rows and columns H touches.
        block = work[k + 1 :, :]
        block -= tau * np.outer(v, v.conj() @ block)
        block = work[:, k + 1 :]
        block -= tau * np.outer(block @ v, v.conj())

        if accumulate:
            cols = q[:, k + 1 :]
            cols -= tau * np.outer(cols @ v, v.conj())

    diag = work.diagonal().real.copy()
    sub = work.diagonal(-1).copy()
    offdiag = np.abs(sub)

    # Diagonal phase D with conj(d_k+1) sub_k d_k = |sub_k| makes T real.
    if accumulate:
        d = np.ones(n, dtype=complex)
        for k in range(n - 1):
            d[k + 1] = d[k] * sub[k] / offdiag[k] if offdiag[k] != 0.0 else d[k]
        q = q * d[None, :]

    return Tridiagonal(
        diag=_ldexp(diag, exponent),
        offdiag=_ldexp(offdiag, exponent),
        accumulated_q=q,
    )


def tridiag_eigen(t: Tridiagonal, want_vectors: bool = True) -> EigenDecomposition:
    """Diagonalize a real symmetric tridiagonal with implicit-shift QL.

    Each sweep chases a bulge from the first undeflated off-diagonal up to position
    l, using the Wilkinson shift of the leading 2 x 2 block. An off-diagonal deflates
    once |e_k| <= eps (|d_k| + |d_k+1|).

    Args:
        t ():                   Tridiagonal, with accumulated_q set if vectors are
                                wanted.
        want_vectors (bool):    Accumulate the rotations into accumulated_q.

    Returns:
        EigenDecomposition sorted ascending, ties in iteration order.

    Raises:
        NoConvergence
    """
    n = t.n
    exponent = _scale_exponent(np.concatenate([t.diag, t.offdiag]))
    d = _ldexp(np.array(t.diag, dtype=float, copy=True), -exponent)
    e = np.zeros(n)
    e[: n - 1] = _ldexp(np.asarray(t.offdiag, dtype=float), -exponent)

    z = None
    if want_vectors:
        z = np.eye(n, dtype=complex)
        if t.accumulated_q is not None:
            z = np.array(t.accumulated_q, dtype=complex, copy=True)

    for l in range(n):  # noqa: E741
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                if abs(e[m]) <= EPS * (abs(d[m]) + abs(d[m + 1])):
                    break
                m += 1
            if m == l:
                break

            if sweeps == MAX_QL_SWEEPS:
                raise NoConvergence(
                    f"eigenvalue {l} did not converge in {MAX_QL_SWEEPS} sweeps"
                )
            sweeps += 1

            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0

            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    # Recover from underflow, restart the sweep.
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b

                if z is not None:
                    col = z[:, i + 1].copy()
                    z[:, i + 1] = s * z[:, i] + c * col
                    z[:, i] = c * z[:, i] - s * col
                i -= 1

            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0

    order = np.argsort(d, kind="stable")
    vectors = z[:, order] if z is not None else None

    return EigenDecomposition(eigenvalues=_ldexp(d[order], exponent), vectors=vectors)


def eigh(a: HermitianMatrix) -> EigenDecomposition:
    """Eigenvalues and orthonormal eigenvectors of A, column i being v_i."""
    return tridiag_eigen(tridiagonalize(a, accumulate=True), want_vectors=True)


def spectrum(a: HermitianMatrix) -> np.ndarray:
    """Ascending eigenvalues of A, without building any eigenvectors."""
    t = tridiagonalize(a, accumulate=False)
    return tridiag_eigen(t, want_vectors=False).eigenvalues


def residual_report(
    a: HermitianMatrix, decomposition: EigenDecomposition
) -> ResidualReport:
    """Measure residual, orthonormality and ordering of a decomposition.

    Raises:
        BadShape if the decomposition has no vectors or does not match A.
    """
    v = decomposition.vectors
    if v is None or v.shape != (a.n, a.n) or decomposition.n != a.n:
        raise BadShape("decomposition does not carry vectors of the matrix order")

    lam = decomposition.eigenvalues
    residual = a.entries @ v - v * lam[None, :]
    defect = v.conj().T @ v - np.eye(a.n)

    return ResidualReport(
        max_residual=float(np.max(np.linalg.norm(residual, axis=0))),
        max_orthonormality_defect=float(np.max(np.abs(defect))),
        ascending=bool(np.all(np.diff(lam) >= 0)),
    )
