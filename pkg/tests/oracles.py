"""Independent reference computations used as test oracles.

Deliberately naive implementations (cyclic Jacobi, brute-force checks) that
share no code with the library paths they validate.
"""

import numpy as np


def jacobi_eigenvalues_symmetric(a: np.ndarray, sweeps: int = 50, tol: float = 1e-14) -> np.ndarray:
    """Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations."""
    a = np.array(a, dtype=np.float64, copy=True)
    n = a.shape[0]
    for _ in range(sweeps):
        off = np.sqrt(np.sum(np.tril(a, -1) ** 2))
        if off < tol * max(1.0, np.max(np.abs(np.diag(a)))):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if a[p, q] == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * a[p, q])
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rot = np.eye(n)
                rot[p, p] = rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                a = rot.T @ a @ rot
    return np.sort(np.diag(a))


def jacobi_eigenvalues_hermitian(h: np.ndarray) -> np.ndarray:
    """Eigenvalues of a complex Hermitian matrix, ascending.

    Embeds H = X + iY into the real symmetric [[X, -Y], [Y, X]], whose
    spectrum is that of H with every eigenvalue doubled.
    """
    h = np.asarray(h, dtype=np.complex128)
    x, y = h.real, h.imag
    big = np.block([[x, -y], [y, x]])
    w = jacobi_eigenvalues_symmetric(big)
    return w[::2]


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-ish unitary via QR of a random complex Gaussian matrix."""
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(a)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_hpd(rng: np.random.Generator, n: int) -> np.ndarray:
    """Random Hermitian positive definite matrix with a unit ridge."""
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return a @ a.conj().T + np.eye(n)
