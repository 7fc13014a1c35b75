"""Newton-type steps on f = sum |g_j|^2 and the iteration loop.

Three step rules:

* mnm_step — the mixed Newton step z' = z - B^{-1} df/dzbar, where B is the
  Hermitian mixed Wirtinger Hessian (Cholesky + two triangular solves).
* regularized_mnm_step — the same with B replaced by B + Xi P Xi*, for models
  declared multilinear in variable blocks, where the columns of Xi span the
  symmetry-induced kernel of B. The step does not depend on the positive
  definite weight P.
* full_newton_step — the classical Newton step on f over R^(2n), using the
  full real Hessian (symmetric-indefinite solve, since it is indefinite at
  saddle points).

Steps are pure (no line search, no trust region): the global dynamics of the
undamped map is the object of interest.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import DomainError, NotPositiveDefiniteError, SingularHessianError
from .linalg import cholesky_hermitian, solve_cholesky
from .model import ResidualModel, print_model
from .wirtinger import WirtingerBundle, bundle, real_gradient, real_hessian_from_bundle

METHODS = ("mnm", "regularized_mnm", "full_newton")

TERM_CONVERGED = "converged"
TERM_MAX_ITER = "max_iter"
TERM_DIVERGED = "diverged"
TERM_SINGULAR = "singular_hessian"
TERM_DOMAIN = "domain_error"


@dataclass(frozen=True)
class SolveOptions:
    method: str = "mnm"
    max_iter: int = 200
    grad_tol: float = 1e-10
    divergence_radius: float = 1e8
    damping: float | None = None  # None = pure Newton steps

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.grad_tol <= 0 or self.divergence_radius <= 0:
            raise ValueError("tolerances must be positive")
        if self.damping is not None and not (0.0 < self.damping <= 1.0):
            raise ValueError("damping must lie in (0, 1]")


@dataclass
class Trace:
    method: str
    model_text: str
    z0: np.ndarray
    iterates: list = field(default_factory=list)   # list of (n,) arrays
    f: list = field(default_factory=list)
    grad_norm: list = field(default_factory=list)
    step_status: list = field(default_factory=list)
    termination: str = TERM_MAX_ITER
    error_detail: str = ""
    z_star: np.ndarray | None = None
    delta_norm: list | None = None  # ||z_k - z_star|| when z_star is supplied

    @property
    def steps(self) -> int:
        return len(self.iterates) - 1

    @property
    def final(self) -> np.ndarray:
        return self.iterates[-1]


def _cvec(z, n: int | None = None) -> np.ndarray:
    v = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    if n is not None and v.shape != (n,):
        raise ValueError(f"point has shape {v.shape}, expected ({n},)")
    return v


def mnm_step(model: ResidualModel, z) -> np.ndarray:
    """One mixed Newton step; raises SingularHessianError if B fails Cholesky."""
    b = bundle(model, _cvec(z, model.n))
    return _mnm_from_bundle(b)


def _mnm_from_bundle(b: WirtingerBundle) -> np.ndarray:
    try:
        L = cholesky_hermitian(b.mixed_hess)
    except NotPositiveDefiniteError as err:
        raise SingularHessianError(str(err)) from err
    return b.point - solve_cholesky(L, b.grad_conj)


def symmetry_basis(model: ResidualModel, z) -> np.ndarray:
    """Matrix Xi (n x (l-1)) of symmetry directions at z for a blocked model.

    Column j carries the first block's sub-vector with a plus sign and the
    (j+1)-th block's sub-vector negated; these directions span the scaling
    symmetries of a multilinear model and lie in the kernel of B.
    """
    if model.blocks is None:
        raise ValueError("model declares no blocks")
    z = _cvec(z, model.n)
    l = len(model.blocks)
    xi = np.zeros((model.n, l - 1), dtype=np.complex128)
    first = np.asarray(model.blocks[0])
    for j in range(1, l):
        rows = np.asarray(model.blocks[j])
        xi[first, j - 1] = z[first]
        xi[rows, j - 1] = -z[rows]
    return xi


def regularized_mnm_step(model: ResidualModel, z, P=None) -> np.ndarray:
    """Mixed Newton step with B + Xi P Xi* in place of B (P defaults to I).

    The resulting step is invariant to the choice of the positive definite
    weight P as long as the kernel of B equals the span of Xi's columns.
    """
    z = _cvec(z, model.n)
    xi = symmetry_basis(model, z)
    b = bundle(model, z)
    if P is None:
        reg = xi @ xi.conj().T
    else:
        P = np.asarray(P, dtype=np.complex128)
        if P.shape != (xi.shape[1], xi.shape[1]):
            raise ValueError(f"P must be {xi.shape[1]} x {xi.shape[1]}")
        reg = xi @ P @ xi.conj().T
    try:
        L = cholesky_hermitian(b.mixed_hess + reg)
    except NotPositiveDefiniteError as err:
        raise SingularHessianError(
            f"regularized mixed Hessian still singular: {err}"
        ) from err
    return b.point - solve_cholesky(L, b.grad_conj)


def full_newton_step(model: ResidualModel, z) -> np.ndarray:
    """Classical Newton step on f over (Re z, Im z), mapped back to C^n."""
    z = _cvec(z, model.n)
    b = bundle(model, z)
    H = real_hessian_from_bundle(b)
    g = real_gradient(b)
    try:
        p = scipy.linalg.solve(H, g, assume_a="sym")
    except (scipy.linalg.LinAlgError, ValueError) as err:
        raise SingularHessianError(f"real Hessian solve failed: {err}") from err
    if not np.all(np.isfinite(p)):
        raise SingularHessianError("real Hessian is numerically singular")
    n = model.n
    return z - (p[:n] + 1j * p[n:])


_STEPPERS = {
    "mnm": lambda model, b, z: _mnm_from_bundle(b),
    "regularized_mnm": lambda model, b, z: regularized_mnm_step(model, z),
    "full_newton": lambda model, b, z: full_newton_step(model, z),
}


def run(model: ResidualModel, z0, opts: SolveOptions = SolveOptions(), z_star=None) -> Trace:
    """Iterate the chosen step rule until convergence, divergence, or failure.

    Convergence means ||df/dzbar|| <= grad_tol (the stationarity condition);
    divergence means ||z|| > divergence_radius. Errors do not raise: they are
    recorded as the trace termination status.
    """
    z = _cvec(z0, model.n)
    if not np.all(np.isfinite(z)):
        raise ValueError("initial point must be finite")
    if opts.method == "regularized_mnm" and model.blocks is None:
        raise ValueError("regularized_mnm requires a model with declared blocks")
    trace = Trace(opts.method, print_model(model), z.copy())
    if z_star is not None:
        trace.z_star = _cvec(z_star, model.n)
        trace.delta_norm = []

    for _ in range(opts.max_iter + 1):
        try:
            b = bundle(model, z)
        except DomainError as err:
            trace.termination = TERM_DOMAIN
            trace.error_detail = str(err)
            trace.step_status.append(TERM_DOMAIN)
            break
        trace.iterates.append(z.copy())
        trace.f.append(b.f)
        gnorm = float(np.linalg.norm(b.grad_conj))
        trace.grad_norm.append(gnorm)
        if trace.delta_norm is not None:
            trace.delta_norm.append(float(np.linalg.norm(z - trace.z_star)))
        if gnorm <= opts.grad_tol:
            trace.termination = TERM_CONVERGED
            break
        if np.linalg.norm(z) > opts.divergence_radius:
            trace.termination = TERM_DIVERGED
            break
        if trace.steps >= opts.max_iter:
            trace.termination = TERM_MAX_ITER
            break
        try:
            z_next = _STEPPERS[opts.method](model, b, z)
        except SingularHessianError as err:
            trace.termination = TERM_SINGULAR
            trace.error_detail = str(err)
            trace.step_status.append(TERM_SINGULAR)
            break
        except DomainError as err:
            trace.termination = TERM_DOMAIN
            trace.error_detail = str(err)
            trace.step_status.append(TERM_DOMAIN)
            break
        if opts.damping is not None:
            z_next = z + opts.damping * (z_next - z)
        trace.step_status.append("ok")
        z = z_next
    return trace


# --- serialization ----------------------------------------------------------

def _pairs(v: np.ndarray) -> list:
    return [[float(x.real), float(x.imag)] for x in np.atleast_1d(v)]


def trace_to_dict(trace: Trace) -> dict:
    out = {
        "method": trace.method,
        "model": trace.model_text,
        "z0": _pairs(trace.z0),
        "iterates": [_pairs(z) for z in trace.iterates],
        "f": [float(x) for x in trace.f],
        "grad_norm": [float(x) for x in trace.grad_norm],
        "status": trace.termination,
    }
    if trace.error_detail:
        out["error_detail"] = trace.error_detail
    if trace.z_star is not None:
        out["z_star"] = _pairs(trace.z_star)
        out["delta_norm"] = [float(x) for x in trace.delta_norm]
    return out


def trace_to_json(trace: Trace, indent: int | None = 2) -> str:
    return json.dumps(trace_to_dict(trace), indent=indent)


def trace_from_dict(data: dict) -> Trace:
    def vec(pairs):
        return np.array([complex(re, im) for re, im in pairs], dtype=np.complex128)

    trace = Trace(data["method"], data["model"], vec(data["z0"]))
    trace.iterates = [vec(p) for p in data["iterates"]]
    trace.f = list(data["f"])
    trace.grad_norm = list(data["grad_norm"])
    trace.termination = data["status"]
    trace.error_detail = data.get("error_detail", "")
    if "z_star" in data:
        trace.z_star = vec(data["z_star"])
        trace.delta_norm = list(data["delta_norm"])
    return trace
