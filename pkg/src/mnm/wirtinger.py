"""Wirtinger derivative objects of f = sum |g_j|^2 assembled from residual jets.

For holomorphic residuals the first- and second-order Wirtinger data of f are

    df/dzbar      = sum_j g_j * conj(g_j')          (conjugate gradient)
    d2f/dzbar dz  = sum_j conj(g_j') (g_j')^T       (mixed Hessian, Hermitian PSD)
    d2f/dzbar^2   = sum_j g_j * conj(g_j'')         (holomorphic-block Hessian)

together with the conjugate blocks. The real 2n x 2n Hessian over
(Re z, Im z) is recovered by the linear change of coordinates between
(Re z, Im z) and (z, zbar).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .model import ResidualModel, eval_jet2


@dataclass
class WirtingerBundle:
    point: np.ndarray       # (n,)
    f: float
    grad_conj: np.ndarray   # (n,)   df/dzbar
    mixed_hess: np.ndarray  # (n,n)  d2f/dzbar dz, Hermitian PSD
    holo_hess: np.ndarray   # (n,n)  d2f/dzbar^2, complex symmetric


def bundle(model: ResidualModel, z) -> WirtingerBundle:
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    n = model.n
    f = 0.0
    gc = np.zeros(n, dtype=np.complex128)
    B = np.zeros((n, n), dtype=np.complex128)
    A = np.zeros((n, n), dtype=np.complex128)
    for j in range(model.m):
        jet = eval_jet2(model, j, z)
        f += abs(jet.value) ** 2
        gc += jet.value * jet.grad.conj()
        B += np.outer(jet.grad.conj(), jet.grad)
        A += jet.value * jet.hess.conj()
    if not (np.isfinite(f) and np.all(np.isfinite(gc)) and np.all(np.isfinite(B)) and np.all(np.isfinite(A))):
        raise DomainError("non_finite", "objective assembly")
    return WirtingerBundle(z.copy(), float(f), gc, B, A)


def grad_norm(model: ResidualModel, z) -> float:
    return float(np.linalg.norm(bundle(model, z).grad_conj))


def complex_hessian(b: WirtingerBundle) -> np.ndarray:
    """Full 2n x 2n Wirtinger Hessian in (z, zbar) coordinates.

    [[d2f/dz2, d2f/dz dzbar], [d2f/dzbar dz, d2f/dzbar2]]
    = [[conj(A), conj(B)], [B, A]].
    """
    A, B = b.holo_hess, b.mixed_hess
    n = A.shape[0]
    H = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    H[:n, :n] = A.conj()
    H[:n, n:] = B.conj()
    H[n:, :n] = B
    H[n:, n:] = A
    return H


def real_gradient(b: WirtingerBundle) -> np.ndarray:
    """Gradient of f over (Re z, Im z): (2 Re gc, 2 Im gc)."""
    return np.concatenate([2.0 * b.grad_conj.real, 2.0 * b.grad_conj.imag])


def real_hessian(model: ResidualModel, z) -> np.ndarray:
    """Real symmetric 2n x 2n Hessian of f over (Re z, Im z)."""
    return real_hessian_from_bundle(bundle(model, z))


def real_hessian_from_bundle(b: WirtingerBundle) -> np.ndarray:
    n = b.mixed_hess.shape[0]
    eye = np.eye(n)
    M = np.block([[eye, 1j * eye], [eye, -1j * eye]])  # d(z, zbar)/d(Re z, Im z)
    H = M.T @ complex_hessian(b) @ M
    H = H.real
    return 0.5 * (H + H.T)


def mixed_hessian_rank(b: WirtingerBundle, tol: float = 1e-9) -> int:
    """Numerical rank of the mixed Hessian; n means the residual derivatives span."""
    s = np.linalg.svd(b.mixed_hess, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > tol * s[0]))
