"""Dense complex linear algebra primitives.

Problem sizes are tiny (n <= ~16), so everything is dense. The Hermitian
Cholesky is written out explicitly to attach pivot-level diagnostics; singular
values and symmetric eigenvalues are delegated to LAPACK through numpy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .errors import NotPositiveDefiniteError

DEFAULT_PIVOT_TOL = 1e-12


@dataclass(frozen=True)
class Signature:
    """Inertia of a real symmetric matrix: eigenvalue counts by sign."""

    n_plus: int
    n_zero: int
    n_minus: int
    tol: float

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.n_plus, self.n_zero, self.n_minus)


def _as_square(m) -> np.ndarray:
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise ValueError(f"expected a nonempty square matrix, got shape {a.shape}")
    return a


def cholesky_hermitian(m, tol: float = DEFAULT_PIVOT_TOL) -> np.ndarray:
    """Lower-triangular L with L L* = (M + M*)/2 and real positive diagonal.

    Raises NotPositiveDefiniteError when a pivot falls at or below
    tol * max(diagonal); the pivot index and value are reported so callers can
    recognize a degenerate mixed Hessian.
    """
    a = _as_square(m)
    a = 0.5 * (a + a.conj().T)
    n = a.shape[0]
    max_diag = float(np.max(a.real.diagonal(), initial=0.0))
    threshold = tol * max_diag
    L = np.zeros_like(a)
    for k in range(n):
        pivot = a[k, k].real - np.vdot(L[k, :k], L[k, :k]).real
        if pivot <= threshold:
            raise NotPositiveDefiniteError(k, float(pivot))
        L[k, k] = np.sqrt(pivot)
        if k + 1 < n:
            L[k + 1 :, k] = (a[k + 1 :, k] - L[k + 1 :, :k] @ L[k, :k].conj()) / L[k, k]
    return L


def solve_cholesky(L: np.ndarray, b) -> np.ndarray:
    """Solve L L* x = b given the lower Cholesky factor L."""
    b = np.asarray(b, dtype=np.complex128)
    if b.shape[0] != L.shape[0]:
        raise ValueError(f"dimension mismatch: L is {L.shape}, b is {b.shape}")
    y = solve_triangular(L, b, lower=True)
    return solve_triangular(L, y, lower=True, trans="C")


def singular_values(m) -> np.ndarray:
    """Singular values of a dense complex matrix, sorted descending."""
    return np.linalg.svd(_as_square(m), compute_uv=False)


def hermitian_eigenvalues(m) -> np.ndarray:
    """Eigenvalues of (M + M*)/2, ascending."""
    a = _as_square(m)
    return np.linalg.eigvalsh(0.5 * (a + a.conj().T))


def signature_real_symmetric(m, tol: float = 1e-9) -> Signature:
    """Counts of eigenvalues of a real symmetric matrix above/at/below zero.

    "Zero" means within tol * ||M|| (spectral norm) of 0.
    """
    a = np.asarray(m, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    a = 0.5 * (a + a.T)
    w = np.linalg.eigvalsh(a)
    threshold = tol * float(np.max(np.abs(w), initial=0.0))
    n_plus = int(np.sum(w > threshold))
    n_minus = int(np.sum(w < -threshold))
    n_zero = w.size - n_plus - n_minus
    return Signature(n_plus, n_zero, n_minus, tol)
