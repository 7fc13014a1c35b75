"""Second-order holomorphic jets: exact value/gradient/Hessian propagation.

Two evaluation paths over the same expression trees:

* eval_jet — n-variable jets (value, gradient vector, symmetric Hessian
  matrix) used by the solvers and the critical-point machinery. Domain
  violations raise DomainError.

* eval_scalar_grid — single-variable jets evaluated elementwise over numpy
  arrays, used for basin rasterization where per-point exceptions are
  replaced by a dead-point mask.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .expr import Add, Const, Div, Exp, Expr, Log, Mul, Neg, Pow, Sub, Var

TINY = 1e-300  # |denominator| or |log argument| below this is a domain error


@dataclass
class Jet2:
    """Value, holomorphic gradient (n,) and symmetric Hessian (n, n)."""

    value: complex
    grad: np.ndarray
    hess: np.ndarray


def _jet_const(value: complex, n: int) -> Jet2:
    return Jet2(value, np.zeros(n, dtype=np.complex128), np.zeros((n, n), dtype=np.complex128))


def _jet_var(i: int, z: np.ndarray, n: int) -> Jet2:
    g = np.zeros(n, dtype=np.complex128)
    g[i] = 1.0
    return Jet2(complex(z[i]), g, np.zeros((n, n), dtype=np.complex128))


def _mirror(h: np.ndarray) -> np.ndarray:
    """Copy the lower triangle onto the upper one: exact symmetry by construction.

    (numpy's vectorized complex multiply is FMA-based, so products like
    outer(g, g) are only symmetric up to the last bit.)
    """
    return np.tril(h) + np.tril(h, -1).T


def _mul(u: Jet2, v: Jet2) -> Jet2:
    outer = np.outer(u.grad, v.grad)
    return Jet2(
        u.value * v.value,
        u.value * v.grad + v.value * u.grad,
        _mirror(u.value * v.hess + v.value * u.hess + outer + outer.T),
    )


def _chain(f0: complex, f1: complex, f2: complex, u: Jet2) -> Jet2:
    """Jet of f(u) from the scalar derivatives f0 = f(u), f1 = f'(u), f2 = f''(u)."""
    return Jet2(f0, f1 * u.grad, _mirror(f1 * u.hess + f2 * np.outer(u.grad, u.grad)))


def _node_info(e: Expr):
    from .expr import print_expression

    return print_expression(e), getattr(e, "pos", None)


def eval_jet(e: Expr, z: np.ndarray) -> Jet2:
    """Evaluate the expression and its first two holomorphic derivatives at z."""
    z = np.asarray(z, dtype=np.complex128)
    n = z.shape[0]
    return _eval(e, z, n)


def _eval(e: Expr, z: np.ndarray, n: int) -> Jet2:
    if isinstance(e, Const):
        return _jet_const(e.value, n)
    if isinstance(e, Var):
        if e.index >= n:
            raise IndexError(f"variable z{e.index + 1} exceeds model dimension {n}")
        return _jet_var(e.index, z, n)
    if isinstance(e, Add):
        u, v = _eval(e.left, z, n), _eval(e.right, z, n)
        return Jet2(u.value + v.value, u.grad + v.grad, u.hess + v.hess)
    if isinstance(e, Sub):
        u, v = _eval(e.left, z, n), _eval(e.right, z, n)
        return Jet2(u.value - v.value, u.grad - v.grad, u.hess - v.hess)
    if isinstance(e, Neg):
        u = _eval(e.operand, z, n)
        return Jet2(-u.value, -u.grad, -u.hess)
    if isinstance(e, Mul):
        return _mul(_eval(e.left, z, n), _eval(e.right, z, n))
    if isinstance(e, Div):
        u, v = _eval(e.left, z, n), _eval(e.right, z, n)
        if abs(v.value) < TINY:
            name, pos = _node_info(e)
            raise DomainError("div_by_zero", name, pos)
        w = v.value
        recip = _chain(1.0 / w, -1.0 / w**2, 2.0 / w**3, v)
        return _mul(u, recip)
    if isinstance(e, Pow):
        u = _eval(e.base, z, n)
        k = e.exponent
        if k == 0:
            return _jet_const(1.0 + 0j, n)
        if k == 1:
            return u
        if k < 0 and abs(u.value) < TINY:
            name, pos = _node_info(e)
            raise DomainError("div_by_zero", name, pos)
        w = u.value
        return _chain(w**k, k * w ** (k - 1), k * (k - 1) * w ** (k - 2), u)
    if isinstance(e, Exp):
        u = _eval(e.operand, z, n)
        w = np.exp(u.value)
        if not np.isfinite(w):
            name, pos = _node_info(e)
            raise DomainError("non_finite", name, pos)
        return _chain(complex(w), complex(w), complex(w), u)
    if isinstance(e, Log):
        u = _eval(e.operand, z, n)
        if abs(u.value) < TINY:
            name, pos = _node_info(e)
            raise DomainError("log_of_zero", name, pos)
        w = u.value
        return _chain(complex(np.log(w)), 1.0 / w, -1.0 / w**2, u)
    raise TypeError(f"unknown node {e!r}")


# --- vectorized single-variable path ---------------------------------------

def eval_scalar_grid(e: Expr, z: np.ndarray, order: int = 1):
    """Evaluate a single-variable expression elementwise over an array.

    Returns (value, d1) for order 1 or (value, d1, d2) for order 2. Domain
    violations (poles, log of 0, overflow) surface as non-finite entries;
    callers mask them with numpy.isfinite.
    """
    z = np.asarray(z, dtype=np.complex128)
    with np.errstate(all="ignore"):
        return _eval_grid(e, z, order)


def _eval_grid(e: Expr, z: np.ndarray, order: int):
    zero = np.zeros_like(z)
    if isinstance(e, Const):
        v = np.full_like(z, e.value)
        return (v, zero) if order == 1 else (v, zero, zero.copy())
    if isinstance(e, Var):
        if e.index != 0:
            raise IndexError("grid evaluation is single-variable (z1 only)")
        one = np.ones_like(z)
        return (z, one) if order == 1 else (z, one, zero)
    if isinstance(e, (Add, Sub)):
        u = _eval_grid(e.left, z, order)
        v = _eval_grid(e.right, z, order)
        sign = 1.0 if isinstance(e, Add) else -1.0
        return tuple(a + sign * b for a, b in zip(u, v))
    if isinstance(e, Neg):
        return tuple(-a for a in _eval_grid(e.operand, z, order))
    if isinstance(e, Mul):
        u = _eval_grid(e.left, z, order)
        v = _eval_grid(e.right, z, order)
        if order == 1:
            return (u[0] * v[0], u[0] * v[1] + u[1] * v[0])
        return (
            u[0] * v[0],
            u[0] * v[1] + u[1] * v[0],
            u[0] * v[2] + 2.0 * u[1] * v[1] + u[2] * v[0],
        )
    if isinstance(e, Div):
        u = _eval_grid(e.left, z, order)
        v = _eval_grid(e.right, z, order)
        w = u[0] / v[0]
        d1 = (u[1] - w * v[1]) / v[0]
        if order == 1:
            return (w, d1)
        d2 = (u[2] - w * v[2] - 2.0 * d1 * v[1]) / v[0]
        return (w, d1, d2)
    if isinstance(e, Pow):
        k = e.exponent
        if k == 0:
            one = np.ones_like(z)
            return (one, zero) if order == 1 else (one, zero, zero.copy())
        u = _eval_grid(e.base, z, order)
        if k == 1:
            return u
        f0 = u[0] ** k
        f1 = k * u[0] ** (k - 1)
        if order == 1:
            return (f0, f1 * u[1])
        f2 = k * (k - 1) * u[0] ** (k - 2)
        return (f0, f1 * u[1], f1 * u[2] + f2 * u[1] * u[1])
    if isinstance(e, Exp):
        u = _eval_grid(e.operand, z, order)
        w = np.exp(u[0])
        if order == 1:
            return (w, w * u[1])
        return (w, w * u[1], w * (u[2] + u[1] * u[1]))
    if isinstance(e, Log):
        u = _eval_grid(e.operand, z, order)
        w = np.log(u[0])
        d1 = u[1] / u[0]
        if order == 1:
            return (w, d1)
        return (w, d1, u[2] / u[0] - d1 * d1)
    raise TypeError(f"unknown node {e!r}")
