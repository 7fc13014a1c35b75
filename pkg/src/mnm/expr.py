"""Holomorphic expression trees and the model-file grammar.

Grammar (UTF-8 text):

    model    := 'n' '=' INT ';' gdef+ blockdef?
    gdef     := 'g'<k> '=' expr ';'            (k = 1, 2, ... in order)
    blockdef := 'blocks' '=' ('[' INT '..' INT ']')+ ';'
    expr     := term (('+'|'-') term)*
    term     := factor (('*'|'/') factor)*
    factor   := atom ('^' int)?
    atom     := ('+'|'-') atom | complex-literal | 'z'<i> | '(' expr ')'
              | 'exp(' expr ')' | 'log(' expr ')'
    complex-literal := float | float 'i'

Constant subexpressions are folded at parse time, so "(5-2i)" and "5-2i"
both come out as a single constant node. The same grammar is used for
complex literals on the command line (parse_complex).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ModelSyntaxError


@dataclass(frozen=True)
class Expr:
    """Base expression node; operators build trees and fold constants."""

    def __add__(self, other):
        return _fold(Add(self, _wrap(other)))

    def __radd__(self, other):
        return _fold(Add(_wrap(other), self))

    def __sub__(self, other):
        return _fold(Sub(self, _wrap(other)))

    def __rsub__(self, other):
        return _fold(Sub(_wrap(other), self))

    def __mul__(self, other):
        return _fold(Mul(self, _wrap(other)))

    def __rmul__(self, other):
        return _fold(Mul(_wrap(other), self))

    def __truediv__(self, other):
        return _fold(Div(self, _wrap(other)))

    def __rtruediv__(self, other):
        return _fold(Div(_wrap(other), self))

    def __pow__(self, k):
        if not isinstance(k, int):
            raise TypeError("exponent must be an integer")
        return _fold(Pow(self, k))

    def __neg__(self):
        return _fold(Neg(self))


@dataclass(frozen=True)
class Const(Expr):
    value: complex
    pos: tuple[int, int] | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Var(Expr):
    index: int  # 0-based
    pos: tuple[int, int] | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Add(Expr):
    left: Expr
    right: Expr
    pos: tuple[int, int] | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Sub(Expr):
    left: Expr
    right: Expr
    pos: tuple[int, int] | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Mul(Expr):
    left: Expr
    right: Expr
    pos: tuple[int, int] | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Div(Expr):
    left: Expr
    right: Expr
    pos: tuple[int, int] | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int
    pos: tuple[int, int] | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr
    pos: tuple[int, int] | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Exp(Expr):
    operand: Expr
    pos: tuple[int, int] | None = field(default=None, compare=False)


@dataclass(frozen=True)
class Log(Expr):
    operand: Expr
    pos: tuple[int, int] | None = field(default=None, compare=False)


def const(value) -> Const:
    return Const(complex(value))


def var(index: int) -> Var:
    return Var(index)


def _wrap(x) -> Expr:
    if isinstance(x, Expr):
        return x
    return Const(complex(x))


def _fold(e: Expr) -> Expr:
    """Collapse an operation on constant children into a constant."""
    import cmath

    if isinstance(e, (Add, Sub, Mul, Div)) and isinstance(e.left, Const) and isinstance(e.right, Const):
        a, b = e.left.value, e.right.value
        if isinstance(e, Add):
            return Const(a + b, e.pos)
        if isinstance(e, Sub):
            return Const(a - b, e.pos)
        if isinstance(e, Mul):
            return Const(a * b, e.pos)
        if abs(b) == 0.0:
            raise ZeroDivisionError("constant division by zero")
        return Const(a / b, e.pos)
    if isinstance(e, Neg) and isinstance(e.operand, Const):
        return Const(-e.operand.value, e.pos)
    if isinstance(e, Pow) and isinstance(e.base, Const):
        if e.exponent < 0 and abs(e.base.value) == 0.0:
            raise ZeroDivisionError("zero to a negative power")
        return Const(e.base.value ** e.exponent, e.pos)
    if isinstance(e, Exp) and isinstance(e.operand, Const):
        return Const(cmath.exp(e.operand.value), e.pos)
    if isinstance(e, Log) and isinstance(e.operand, Const):
        if abs(e.operand.value) == 0.0:
            raise ValueError("log of constant zero")
        return Const(cmath.log(e.operand.value), e.pos)
    return e


def walk(e: Expr):
    """Yield every node of the tree, parents before children."""
    yield e
    for name in ("left", "right", "base", "operand"):
        child = getattr(e, name, None)
        if isinstance(child, Expr):
            yield from walk(child)


def max_var_index(e: Expr) -> int:
    """Largest 0-based variable index used, or -1 for constant expressions."""
    return max((n.index for n in walk(e) if isinstance(n, Var)), default=-1)


# --- tokenizer -------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+(?:\.(?!\.)\d*)?|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z][A-Za-z0-9]*)
  | (?P<dots>\.\.)
  | (?P<sym>[=;+\-*/^()\[\]])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Token:
    kind: str  # "number" | "ident" | "sym" | "dots" | "eof"
    text: str
    line: int
    col: int
    end: int  # absolute offset just past the token


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ModelSyntaxError(
                f"unexpected character {text[pos]!r}", line, pos - line_start + 1
            )
        kind = m.lastgroup
        if kind == "ws":
            line += m.group().count("\n")
            if "\n" in m.group():
                line_start = m.start() + m.group().rfind("\n") + 1
        else:
            tokens.append(_Token(kind, m.group(), line, m.start() - line_start + 1, m.end()))
        pos = m.end()
    tokens.append(_Token("eof", "", line, pos - line_start + 1, pos))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def cur(self) -> _Token:
        return self.tokens[self.i]

    def error(self, message: str, tok: _Token | None = None):
        tok = tok or self.cur
        raise ModelSyntaxError(message, tok.line, tok.col)

    def advance(self) -> _Token:
        tok = self.cur
        if tok.kind != "eof":
            self.i += 1
        return tok

    def expect_sym(self, sym: str) -> _Token:
        if self.cur.kind == "sym" and self.cur.text == sym:
            return self.advance()
        self.error(f"expected {sym!r}, found {self.cur.text or 'end of input'!r}")

    def at_sym(self, *syms: str) -> bool:
        return self.cur.kind == "sym" and self.cur.text in syms

    def parse_int(self) -> int:
        sign = 1
        if self.at_sym("-"):
            self.advance()
            sign = -1
        elif self.at_sym("+"):
            self.advance()
        tok = self.cur
        if tok.kind != "number" or not re.fullmatch(r"\d+", tok.text):
            self.error("expected an integer")
        self.advance()
        return sign * int(tok.text)

    # expr := term (('+'|'-') term)*
    def parse_expr(self) -> Expr:
        e = self.parse_term()
        while self.at_sym("+", "-"):
            op = self.advance()
            rhs = self.parse_term()
            node = Add(e, rhs, (op.line, op.col)) if op.text == "+" else Sub(e, rhs, (op.line, op.col))
            e = _fold(node)
        return e

    # term := factor (('*'|'/') factor)*
    def parse_term(self) -> Expr:
        e = self.parse_factor()
        while self.at_sym("*", "/"):
            op = self.advance()
            rhs = self.parse_factor()
            try:
                node = Mul(e, rhs, (op.line, op.col)) if op.text == "*" else Div(e, rhs, (op.line, op.col))
                e = _fold(node)
            except ZeroDivisionError:
                self.error("constant division by zero", op)
        return e

    # factor := ('+'|'-')* atom ('^' int)?   -- '^' binds tighter than the sign
    def parse_factor(self) -> Expr:
        tok = self.cur
        if self.at_sym("-"):
            self.advance()
            return _fold(Neg(self.parse_factor(), (tok.line, tok.col)))
        if self.at_sym("+"):
            self.advance()
            return self.parse_factor()
        e = self.parse_atom()
        if self.at_sym("^"):
            op = self.advance()
            k = self.parse_int()
            try:
                e = _fold(Pow(e, k, (op.line, op.col)))
            except ZeroDivisionError:
                self.error("zero to a negative power", op)
        return e

    def parse_atom(self) -> Expr:
        tok = self.cur
        if tok.kind == "number":
            self.advance()
            value = float(tok.text)
            # a number directly followed by 'i' is an imaginary literal
            if self.cur.kind == "ident" and self.cur.text == "i":
                self.advance()
                return Const(complex(0.0, value), (tok.line, tok.col))
            return Const(complex(value, 0.0), (tok.line, tok.col))
        if tok.kind == "ident":
            m = re.fullmatch(r"z(\d+)", tok.text)
            if m:
                self.advance()
                index = int(m.group(1))
                if index < 1:
                    self.error("variable indices start at z1", tok)
                return Var(index - 1, (tok.line, tok.col))
            if tok.text in ("exp", "log"):
                self.advance()
                self.expect_sym("(")
                inner = self.parse_expr()
                self.expect_sym(")")
                try:
                    node = Exp(inner, (tok.line, tok.col)) if tok.text == "exp" else Log(inner, (tok.line, tok.col))
                    return _fold(node)
                except ValueError:
                    self.error("log of constant zero", tok)
            self.error(f"unknown identifier {tok.text!r}", tok)
        if self.at_sym("("):
            self.advance()
            e = self.parse_expr()
            self.expect_sym(")")
            return e
        self.error(f"expected an expression, found {tok.text or 'end of input'!r}")


def parse_expression(text: str) -> Expr:
    """Parse a single expression (no model header)."""
    p = _Parser(text)
    e = p.parse_expr()
    if p.cur.kind != "eof":
        p.error(f"unexpected trailing input {p.cur.text!r}")
    return e


def parse_complex(text: str) -> complex:
    """Parse a complex literal/constant expression like '-1+1i' or '2.5'."""
    e = parse_expression(text)
    if not isinstance(e, Const):
        raise ValueError(f"expected a constant, got an expression with variables: {text!r}")
    return e.value


# --- canonical printing ----------------------------------------------------

def format_complex(z: complex) -> str:
    """Shortest-round-trip literal for a complex constant, e.g. '(2+0.2i)'."""
    re_, im_ = z.real, z.imag
    if im_ == 0.0:
        return repr(re_)
    if re_ == 0.0:
        return f"{im_!r}i"
    sign = "+" if im_ >= 0 else "-"
    return f"({re_!r}{sign}{abs(im_)!r}i)"


_PREC = {"add": 1, "mul": 2, "neg": 3, "pow": 4, "atom": 5}


def _print(e: Expr) -> tuple[str, int]:
    if isinstance(e, Const):
        s = format_complex(e.value)
        # bare negative reals/imaginaries bind like a unary minus
        prec = _PREC["neg"] if s.startswith("-") else _PREC["atom"]
        return s, prec
    if isinstance(e, Var):
        return f"z{e.index + 1}", _PREC["atom"]
    if isinstance(e, (Add, Sub)):
        op = " + " if isinstance(e, Add) else " - "
        ls, lp = _print(e.left)
        rs, rp = _print(e.right)
        if lp < _PREC["add"]:
            ls = f"({ls})"
        if rp <= _PREC["add"]:
            rs = f"({rs})"
        return ls + op + rs, _PREC["add"]
    if isinstance(e, (Mul, Div)):
        op = "*" if isinstance(e, Mul) else "/"
        ls, lp = _print(e.left)
        rs, rp = _print(e.right)
        if lp < _PREC["mul"]:
            ls = f"({ls})"
        if rp <= _PREC["mul"]:
            rs = f"({rs})"
        return ls + op + rs, _PREC["mul"]
    if isinstance(e, Neg):
        s, p = _print(e.operand)
        if p < _PREC["neg"]:
            s = f"({s})"
        return f"-{s}", _PREC["neg"]
    if isinstance(e, Pow):
        s, p = _print(e.base)
        if p < _PREC["atom"]:
            s = f"({s})"
        return f"{s}^{e.exponent}", _PREC["pow"]
    if isinstance(e, Exp):
        return f"exp({_print(e.operand)[0]})", _PREC["atom"]
    if isinstance(e, Log):
        return f"log({_print(e.operand)[0]})", _PREC["atom"]
    raise TypeError(f"unknown node {e!r}")


def print_expression(e: Expr) -> str:
    return _print(e)[0]
