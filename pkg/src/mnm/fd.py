"""Finite-difference reference derivatives.

These differentiate *values only* and serve as the independent cross-check
for the jet and Wirtinger assemblies, both in the test suite and in the
built-in verification battery. Nothing here shares code with the analytic
derivative path.
"""

from __future__ import annotations

import numpy as np

from .model import ResidualModel, eval_value, objective


def fd_residual_grad(model: ResidualModel, j: int, z, h: float = 1e-6) -> np.ndarray:
    """Central difference of g_j along each real coordinate direction.

    For a holomorphic function the derivative is direction-independent, so the
    real-axis difference approximates the holomorphic gradient.
    """
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    out = np.zeros(model.n, dtype=np.complex128)
    for i in range(model.n):
        e = np.zeros(model.n, dtype=np.complex128)
        e[i] = h
        out[i] = (eval_value(model, j, z + e) - eval_value(model, j, z - e)) / (2 * h)
    return out


def fd_residual_hess(model: ResidualModel, j: int, z, h: float = 1e-6) -> np.ndarray:
    """Central difference of the analytic residual gradient (one FD level)."""
    from .model import eval_jet2

    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    out = np.zeros((model.n, model.n), dtype=np.complex128)
    for i in range(model.n):
        e = np.zeros(model.n, dtype=np.complex128)
        e[i] = h
        gp = eval_jet2(model, j, z + e).grad
        gm = eval_jet2(model, j, z - e).grad
        out[i, :] = (gp - gm) / (2 * h)
    return 0.5 * (out + out.T)


def fd_real_gradient(model: ResidualModel, z, h: float = 1e-6) -> np.ndarray:
    """Gradient of f over (Re z, Im z) from objective values."""
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    n = model.n
    out = np.zeros(2 * n)
    for i in range(2 * n):
        e = np.zeros(n, dtype=np.complex128)
        e[i % n] = h if i < n else 1j * h
        out[i] = (objective(model, z + e) - objective(model, z - e)) / (2 * h)
    return out


def fd_grad_conj(model: ResidualModel, z, h: float = 1e-6) -> np.ndarray:
    """df/dzbar via the Wirtinger operator 1/2 (d/dx + i d/dy) on f values."""
    g = fd_real_gradient(model, z, h)
    n = model.n
    return 0.5 * (g[:n] + 1j * g[n:])


def fd_real_hessian(model: ResidualModel, z, h: float = 1e-4) -> np.ndarray:
    """Second central differences of f over (Re z, Im z)."""
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    n = model.n
    dirs = [np.eye(n, dtype=np.complex128)[i] for i in range(n)]
    dirs += [1j * d for d in dirs[:n]]
    H = np.zeros((2 * n, 2 * n))
    f0 = objective(model, z)
    for i in range(2 * n):
        H[i, i] = (
            objective(model, z + h * dirs[i]) - 2 * f0 + objective(model, z - h * dirs[i])
        ) / h**2
        for k in range(i + 1, 2 * n):
            fpp = objective(model, z + h * dirs[i] + h * dirs[k])
            fpm = objective(model, z + h * dirs[i] - h * dirs[k])
            fmp = objective(model, z - h * dirs[i] + h * dirs[k])
            fmm = objective(model, z - h * dirs[i] - h * dirs[k])
            H[i, k] = H[k, i] = (fpp - fpm - fmp + fmm) / (4 * h**2)
    return H


def fd_mixed_hess(model: ResidualModel, z, h: float = 1e-6) -> np.ndarray:
    """d2f/dzbar dz by differencing the analytic conjugate gradient field.

    Entry (i, k) = d/dz_k of (df/dzbar)_i. A holomorphic-direction difference
    of the field picks out the z-derivative: for a field F(z, zbar),
    (F(z + h e_k) - F(z - h e_k))/2h + (i/(2h))(F(z + ih e_k) - F(z - ih e_k))
    equals dF/dz_k + O(h^2) ... assembled below from two real differences.
    """
    from .wirtinger import bundle as _bundle

    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    n = model.n
    out = np.zeros((n, n), dtype=np.complex128)
    for k in range(n):
        e = np.zeros(n, dtype=np.complex128)
        e[k] = h
        dx = (_bundle(model, z + e).grad_conj - _bundle(model, z - e).grad_conj) / (2 * h)
        dy = (_bundle(model, z + 1j * e).grad_conj - _bundle(model, z - 1j * e).grad_conj) / (2 * h)
        out[:, k] = 0.5 * (dx - 1j * dy)  # d/dz = (d/dx - i d/dy)/2
    return out
