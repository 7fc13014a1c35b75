"""Critical-point classification and convergence-rate prediction.

At a stationary point z* (df/dzbar = 0) with positive definite mixed Hessian
B = L L*, the local behavior of the mixed Newton iteration is governed by the
complex symmetric matrix

    S = -L^{-1} A L^{-T},    A = sum_j g_j(z*) conj(g_j''(z*)),

through the conjugate-linear linearization delta' = -B^{-1} A conj(delta):
the point attracts iff sigma_max(S) < 1, repels iff sigma_max(S) > 1, and in
the attractive case the asymptotic linear rate equals sigma_max(S). The
singular values also pin down the inertia of the real Hessian: it has
n + #{sigma < 1} positive, #{sigma = 1} zero and #{sigma > 1} negative
eigenvalues, so the objective has no local maxima at all.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .errors import NotPositiveDefiniteError, NotStationaryError
from .linalg import Signature, cholesky_hermitian, signature_real_symmetric, singular_values
from .model import ResidualModel
from .rng import Xoshiro256StarStar
from .solver import SolveOptions, Trace, run
from .wirtinger import bundle, real_hessian_from_bundle

CLASS_MINIMUM = "strict_minimum"
CLASS_SADDLE = "saddle"
CLASS_DEGENERATE = "degenerate_boundary"
CLASS_VIOLATED = "assumption_violated"

DEFAULT_STATIONARITY_TOL = 1e-8
DEFAULT_SIGMA_TOL = 1e-6


@dataclass
class CriticalPointReport:
    z_star: np.ndarray
    grad_norm: float
    A: np.ndarray                      # complex symmetric
    B: np.ndarray                      # Hermitian, PD under Assumption 1
    L: np.ndarray | None               # Cholesky factor of B
    S: np.ndarray | None               # -L^{-1} A L^{-T}
    sigma: np.ndarray | None           # singular values of S, descending
    classification: str
    predicted_rate: float | None       # sigma_max(S)
    signature: Signature               # inertia of the real Hessian at z_star
    expected_signature: tuple[int, int, int] | None  # (n + k_lt, k_eq, k_gt) from sigma
    signature_match: bool | None
    sigma_tol: float
    detail: str = ""


def expected_signature_from_sigma(sigma: np.ndarray, n: int, tol: float) -> tuple[int, int, int]:
    """Inertia of the real Hessian implied by the singular values of S.

    Each singular value sigma_j contributes the eigenvalue pair 1 +/- sigma_j,
    so the counts are (n + #{sigma < 1 - tol}, #{|sigma - 1| <= tol},
    #{sigma > 1 + tol}).
    """
    k_lt = int(np.sum(sigma < 1.0 - tol))
    k_gt = int(np.sum(sigma > 1.0 + tol))
    k_eq = sigma.size - k_lt - k_gt
    return (n + k_lt, k_eq, k_gt)


def critical_report(
    model: ResidualModel,
    z_star,
    sigma_tol: float = DEFAULT_SIGMA_TOL,
    stationarity_tol: float = DEFAULT_STATIONARITY_TOL,
) -> CriticalPointReport:
    """Build the classification report at a stationary point.

    Raises NotStationaryError when the gradient at z_star exceeds
    stationarity_tol; a degenerate mixed Hessian does not raise but yields an
    assumption_violated report.
    """
    z_star = np.atleast_1d(np.asarray(z_star, dtype=np.complex128))
    b = bundle(model, z_star)
    gnorm = float(np.linalg.norm(b.grad_conj))
    if gnorm > stationarity_tol:
        raise NotStationaryError(gnorm, stationarity_tol)

    A = 0.5 * (b.holo_hess + b.holo_hess.T)
    B = b.mixed_hess
    H = real_hessian_from_bundle(b)
    sig = signature_real_symmetric(H, tol=1e-9)

    try:
        L = cholesky_hermitian(B)
    except NotPositiveDefiniteError as err:
        return CriticalPointReport(
            z_star, gnorm, A, B, None, None, None, CLASS_VIOLATED, None,
            sig, None, None, sigma_tol, detail=str(err),
        )

    # S = -L^{-1} A L^{-T}: forward-substitute twice on the symmetric A
    Y = solve_triangular(L, A, lower=True)
    S = -solve_triangular(L, Y.T, lower=True).T
    S = 0.5 * (S + S.T)
    sigma = singular_values(S)
    smax = float(sigma[0]) if sigma.size else 0.0

    if smax < 1.0 - sigma_tol:
        classification = CLASS_MINIMUM
    elif smax > 1.0 + sigma_tol:
        classification = CLASS_SADDLE
    else:
        classification = CLASS_DEGENERATE

    expected = expected_signature_from_sigma(sigma, model.n, sigma_tol)
    return CriticalPointReport(
        z_star, gnorm, A, B, L, S, sigma, classification, smax,
        sig, expected, sig.as_tuple() == expected, sigma_tol,
    )


@dataclass
class RateEstimate:
    rate: float | None          # geometric-mean contraction, None if superlinear
    superlinear: bool
    ratios: list[float]         # usable per-step contraction factors


def observed_rate(trace: Trace, z_star, model: ResidualModel | None = None) -> RateEstimate:
    """Measure the per-step contraction of the mismatch along a trace.

    Distances are measured in the metric of the mixed Hessian at z_star when a
    model is supplied and B is positive definite there (||L* delta||);
    otherwise in the plain Euclidean norm, which has the same asymptotic
    ratios. Iterates already at the rounding floor are discarded; ratios
    collapsing toward zero flag superlinear convergence.
    """
    z_star = np.atleast_1d(np.asarray(z_star, dtype=np.complex128))
    if len(trace.iterates) < 6:
        raise ValueError("trace too short to estimate a rate (need >= 6 iterates)")
    Lh = None
    if model is not None:
        try:
            Lh = cholesky_hermitian(bundle(model, z_star).mixed_hess).conj().T
        except NotPositiveDefiniteError:
            Lh = None
    norms = []
    for z in trace.iterates:
        d = np.atleast_1d(z) - z_star
        norms.append(float(np.linalg.norm(Lh @ d if Lh is not None else d)))

    floor = 100.0 * np.finfo(float).eps * (1.0 + float(np.linalg.norm(z_star)))
    ratios = [
        norms[k + 1] / norms[k]
        for k in range(len(norms) - 1)
        if norms[k] > floor and norms[k + 1] > floor
    ]
    if not ratios:
        return RateEstimate(None, True, [])
    window = ratios[-6:]
    if len(window) >= 2 and window[-1] < 0.1 and window[-1] < 0.2 * window[-2]:
        return RateEstimate(None, True, window)
    rate = float(math.exp(np.mean(np.log(window))))
    return RateEstimate(rate, False, window)


@dataclass
class RateComparison:
    sigma_max: float
    observed: list[float]
    max_rel_deviation: float


def rate_prediction_check(
    model: ResidualModel,
    z_star,
    n_starts: int = 10,
    seed: int = 42,
    offset: float = 1e-3,
) -> RateComparison:
    """Compare the measured contraction against sigma_max(S) near a minimum.

    Requires a strict-minimum report with 0 < sigma_max < 1 and S != 0; runs
    the mixed Newton iteration from n_starts random points at the given offset
    from z_star and reports the worst relative deviation of the observed rate.
    """
    report = critical_report(model, z_star)
    if report.classification != CLASS_MINIMUM:
        raise ValueError(f"expected a strict minimum, got {report.classification}")
    smax = report.predicted_rate
    if smax <= 0.0 or np.linalg.norm(report.S) == 0.0:
        raise ValueError("sigma_max(S) must be positive (S = 0 converges superlinearly)")

    z_star = report.z_star
    rng = Xoshiro256StarStar(seed)
    opts = SolveOptions(method="mnm", max_iter=500, grad_tol=1e-13)
    observed = []
    for _ in range(n_starts):
        direction = np.array([rng.complex_disc() for _ in range(model.n)])
        direction /= np.linalg.norm(direction)
        trace = run(model, z_star + offset * direction, opts, z_star=z_star)
        est = observed_rate(trace, z_star, model)
        if est.rate is not None:
            observed.append(est.rate)
    if not observed:
        raise ValueError("no usable rate measurements (all runs superlinear or too short)")
    dev = max(abs(r - smax) / smax for r in observed)
    return RateComparison(smax, observed, dev)


# --- serialization ----------------------------------------------------------

def _cmat(m: np.ndarray | None):
    if m is None:
        return None
    return [[[float(x.real), float(x.imag)] for x in row] for row in np.atleast_2d(m)]


def report_to_dict(r: CriticalPointReport) -> dict:
    return {
        "z_star": [[float(x.real), float(x.imag)] for x in r.z_star],
        "grad_norm": r.grad_norm,
        "A": _cmat(r.A),
        "B": _cmat(r.B),
        "L": _cmat(r.L),
        "S": _cmat(r.S),
        "sigma": None if r.sigma is None else [float(s) for s in r.sigma],
        "classification": r.classification,
        "predicted_rate": r.predicted_rate,
        "signature": list(r.signature.as_tuple()),
        "expected_signature": None if r.expected_signature is None else list(r.expected_signature),
        "signature_match": r.signature_match,
        "sigma_tol": r.sigma_tol,
        "detail": r.detail,
    }


def report_to_json(r: CriticalPointReport, indent: int | None = 2) -> str:
    return json.dumps(report_to_dict(r), indent=indent)
