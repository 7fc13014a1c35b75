"""Residual models f(z) = sum_j |g_j(z)|^2 and the catalog of concrete ones.

A model bundles holomorphic residual expressions g_1..g_m over variables
z1..zn, optionally with a partition of the variables into blocks in which the
residuals are declared multilinear (up to additive constants).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from . import expr as ex
from .errors import ModelSyntaxError, UnknownModelError
from .jets import Jet2, eval_jet
from .rng import Xoshiro256StarStar


@dataclass(frozen=True)
class ResidualModel:
    n: int
    residuals: tuple[ex.Expr, ...]
    blocks: tuple[tuple[int, ...], ...] | None = None  # 0-based variable indices

    @property
    def m(self) -> int:
        return len(self.residuals)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("variable count must be at least 1")
        if not self.residuals:
            raise ValueError("a model needs at least one residual")
        for j, g in enumerate(self.residuals):
            top = ex.max_var_index(g)
            if top >= self.n:
                raise ValueError(f"residual g{j + 1} uses z{top + 1} but n = {self.n}")
        if self.blocks is not None:
            flat = [i for b in self.blocks for i in b]
            if len(self.blocks) < 2 or sorted(flat) != list(range(self.n)):
                raise ValueError("blocks must partition all variables into >= 2 groups")


def eval_jet2(model: ResidualModel, j: int, z) -> Jet2:
    """Value and first two holomorphic derivatives of residual j at z."""
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    if z.shape != (model.n,):
        raise ValueError(f"point has shape {z.shape}, model expects ({model.n},)")
    return eval_jet(model.residuals[j], z)


def eval_value(model: ResidualModel, j: int, z) -> complex:
    return eval_jet2(model, j, z).value


def objective(model: ResidualModel, z) -> float:
    return float(sum(abs(eval_value(model, j, z)) ** 2 for j in range(model.m)))


# --- model files -----------------------------------------------------------

def parse_model(text: str) -> ResidualModel:
    """Parse model-file text (see the grammar in expr.py)."""
    p = ex._Parser(text)

    def expect_ident(name: str):
        tok = p.cur
        if tok.kind != "ident" or tok.text != name:
            p.error(f"expected {name!r}, found {tok.text or 'end of input'!r}")
        p.advance()
        return tok

    expect_ident("n")
    p.expect_sym("=")
    n = p.parse_int()
    if n < 1:
        p.error("n must be at least 1")
    p.expect_sym(";")

    residuals: list[ex.Expr] = []
    blocks = None
    while p.cur.kind != "eof":
        tok = p.cur
        if tok.kind == "ident" and tok.text == "blocks":
            p.advance()
            p.expect_sym("=")
            ranges = []
            while p.at_sym("["):
                p.advance()
                lo = p.parse_int()
                if p.cur.kind != "dots":
                    p.error("expected '..' in a block range")
                p.advance()
                hi = p.parse_int()
                p.expect_sym("]")
                if not (1 <= lo <= hi <= n):
                    p.error(f"block range [{lo}..{hi}] out of bounds for n = {n}", tok)
                ranges.append(tuple(range(lo - 1, hi)))
            p.expect_sym(";")
            blocks = tuple(ranges)
            continue
        m = None
        if tok.kind == "ident":
            m = re.fullmatch(r"g(\d+)", tok.text)
        if m is None:
            p.error(f"expected a residual definition g<k>, found {tok.text!r}")
        k = int(m.group(1))
        if k != len(residuals) + 1:
            p.error(f"residuals must be numbered consecutively; expected g{len(residuals) + 1}")
        p.advance()
        p.expect_sym("=")
        g = p.parse_expr()
        p.expect_sym(";")
        top = ex.max_var_index(g)
        if top >= n:
            p.error(f"g{k} uses z{top + 1} but n = {n}", tok)
        residuals.append(g)

    if not residuals:
        raise ModelSyntaxError("model defines no residuals", p.cur.line, p.cur.col)
    try:
        return ResidualModel(n, tuple(residuals), blocks)
    except ValueError as err:
        raise ModelSyntaxError(str(err), 1, 1) from err


def print_model(model: ResidualModel) -> str:
    """Canonical text form; parse_model(print_model(m)) reproduces m."""
    lines = [f"n={model.n};"]
    for j, g in enumerate(model.residuals):
        lines.append(f"g{j + 1} = {ex.print_expression(g)};")
    if model.blocks is not None:
        ranges = "".join(f"[{b[0] + 1}..{b[-1] + 1}]" for b in model.blocks)
        lines.append(f"blocks = {ranges};")
    return "\n".join(lines) + "\n"


# --- catalog ---------------------------------------------------------------

def _c(z) -> str:
    return ex.format_complex(complex(z))


def _quad(a=-1 + 1j) -> ResidualModel:
    return parse_model(f"n=1; g1 = z1^2 - {_c(a)};")


def _bilinear(c=2 + 1j) -> ResidualModel:
    return parse_model(f"n=2; g1 = z1*z2 - {_c(c)}; blocks = [1..1][2..2];")


_EX_TWO = """
n=1;
g1 = exp((2+0.2i)*z1 + (5-2i));
g2 = log((1-1i)*z1 - (1+0.1i));
g3 = (2*z1 + 5) / (3*z1 + 4);
"""

_EX_THREE = """
n=1;
g1 = exp((-2+5i)*z1 - (2+3i));
g2 = log((0.1+0.5i)*z1 - (1+1i));
g3 = (2*z1 + 5) / (3*z1 + 4);
"""

_EX_FOUR = """
n=1;
g1 = exp((-2+5i)*z1 - (2+3i));
g2 = log((0.1+0.5i)*z1 - (1+1i));
g3 = ((2+1i)*z1 + (1+2i)) / ((-1+1i)*z1^2 + (-4+2i)*z1 - (3+1i));
"""

_RATIONAL_CYCLE = """
n=1;
g1 = ((-10+4i)*z1^2 + 4*z1 + (16-15i)) / (3*z1^2 + (-23+3i)*z1 + (-7+3i));
"""

_CUBIC_CYCLE = """
n=1;
g1 = z1^3 + (1.33+0.81i)*z1^2 + (1.38+1.2i)*z1 + (0.82-0.03i);
"""


def affine_random(seed: int = 1, n: int = 4, m: int = 6) -> ResidualModel:
    """Random complex-affine model whose coefficient vectors span C^n (m >= n)."""
    if m < n:
        raise ValueError("need m >= n residuals for the coefficients to span")
    rng = Xoshiro256StarStar(seed)
    residuals = []
    for _ in range(m):
        g: ex.Expr = ex.const(rng.complex_box(2.0))
        for i in range(n):
            g = g + ex.const(rng.complex_box(2.0)) * ex.var(i)
        residuals.append(g)
    model = ResidualModel(n, tuple(residuals))
    a = np.array([eval_jet2(model, j, np.zeros(n, complex)).grad for j in range(m)])
    if np.linalg.matrix_rank(a, tol=1e-8) < n:  # measure-zero; reseed if ever hit
        return affine_random(seed + 1, n, m)
    return model


@dataclass(frozen=True)
class CatalogEntry:
    build: object  # callable(**params) -> ResidualModel
    params: tuple[str, ...] = ()
    window: tuple[float, float, float, float] | None = None  # default basin window
    sample_box: tuple[complex, float] = (0j, 2.0)  # (center, half width) for test points


CATALOG: dict[str, CatalogEntry] = {
    "quad": CatalogEntry(_quad, ("a",), (-3.0, 3.0, -3.0, 3.0), (0j, 2.0)),
    "ex_two_minima": CatalogEntry(
        lambda: parse_model(_EX_TWO), (), (-6.0, 6.0, -6.0, 6.0), (-2.5 + 0j, 1.2)
    ),
    "ex_three_minima": CatalogEntry(
        lambda: parse_model(_EX_THREE), (), (-6.0, 6.0, -6.0, 6.0), (-1.0 + 0.3j, 1.0)
    ),
    "ex_four_minima": CatalogEntry(
        lambda: parse_model(_EX_FOUR), (), (-6.0, 6.0, -6.0, 6.0), (-1.0 + 0.3j, 1.0)
    ),
    "rational_cycle": CatalogEntry(
        lambda: parse_model(_RATIONAL_CYCLE), (), (-6.0, 6.0, -6.0, 6.0), (1 + 1j, 2.0)
    ),
    "cubic_cycle": CatalogEntry(
        lambda: parse_model(_CUBIC_CYCLE), (), (-3.0, 3.0, -3.0, 3.0), (0j, 1.5)
    ),
    "bilinear": CatalogEntry(_bilinear, ("c",)),
    "affine_random": CatalogEntry(affine_random, ("seed", "n", "m")),
}


def builtin(name: str, **params) -> ResidualModel:
    """Instantiate a catalog model by name, e.g. builtin('quad', a=-1+1j)."""
    entry = CATALOG.get(name)
    if entry is None:
        raise UnknownModelError(
            f"unknown builtin model {name!r}; available: {', '.join(sorted(CATALOG))}"
        )
    bad = set(params) - set(entry.params)
    if bad:
        raise UnknownModelError(f"model {name!r} takes no parameter(s) {sorted(bad)}")
    return entry.build(**params)


def catalog() -> list[str]:
    return sorted(CATALOG)


def default_window(name: str) -> tuple[float, float, float, float] | None:
    entry = CATALOG.get(name)
    return entry.window if entry else None


# --- domain and multilinearity helpers --------------------------------------

def domain_margin(model: ResidualModel, z) -> float:
    """Distance to the nearest domain hazard at z.

    Minimum over all division nodes of |denominator|, and over all log nodes
    of the distance of the argument to the branch cut (the closed negative
    real axis including 0). Infinity when the model has no such nodes.
    """
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    margin = float("inf")

    def visit(e: ex.Expr):
        nonlocal margin
        if isinstance(e, ex.Div):
            w = eval_jet(e.right, z).value
            margin = min(margin, abs(w))
        if isinstance(e, ex.Pow) and e.exponent < 0:
            w = eval_jet(e.base, z).value
            margin = min(margin, abs(w))
        if isinstance(e, ex.Log):
            w = eval_jet(e.operand, z).value
            d = abs(w.imag) if w.real < 0 else abs(w)
            margin = min(margin, d)
        for name in ("left", "right", "base", "operand"):
            child = getattr(e, name, None)
            if isinstance(child, ex.Expr):
                visit(child)

    for g in model.residuals:
        visit(g)
    return margin


def multilinearity_defect(model: ResidualModel, seed: int = 7, samples: int = 20) -> float:
    """Max |second derivative| within a block over random points.

    A model that is multilinear in its declared blocks returns ~0. Used as a
    stochastic sanity check in tests; never on the hot path.
    """
    if model.blocks is None:
        raise ValueError("model declares no blocks")
    rng = Xoshiro256StarStar(seed)
    worst = 0.0
    for _ in range(samples):
        z = np.array([rng.complex_box(2.0) for _ in range(model.n)])
        for j in range(model.m):
            h = eval_jet2(model, j, z).hess
            for block in model.blocks:
                idx = np.asarray(block)
                worst = max(worst, float(np.max(np.abs(h[np.ix_(idx, idx)]))))
    return worst
