"""Coordinate expressions: parsing, evaluation, forward-mode derivatives.

The grammar (documented in docs/grammar.md) covers decimal literals,
chart coordinates, + - * / ^, unary minus, and the functions sin, cos,
exp, log, sqrt. Parsed expressions are immutable trees; evaluation is
pure, so expressions can be evaluated concurrently.

Derivatives are exact forward-mode (dual numbers), never finite
differences. Integer exponents are detected (|p - round(p)| < 1e-12,
zero exponent derivative) and computed by repeated multiplication, so
negative bases work; any other exponent requires a positive base.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

import numpy as np

from . import dual
from .dual import Dual
from .errors import DomainError, ExprSyntaxError, UnknownSymbolError

FUNCTION_NAMES = ("sin", "cos", "exp", "log", "sqrt")

_INT_EXPONENT_TOL = 1e-12
_IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_NUMBER_RE = re.compile(r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Const:
    value: float


@dataclass(frozen=True)
class Var:
    index: int
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"


Node = Union[Const, Var, Neg, BinOp, Call]


@dataclass(frozen=True)
class Chart:
    """A coordinate chart: dimension plus distinct coordinate names."""

    coord_names: tuple[str, ...]

    def __post_init__(self):
        if len(self.coord_names) == 0:
            raise ValueError("chart needs at least one coordinate")
        seen = set()
        for name in self.coord_names:
            if not _IDENT_RE.fullmatch(name or ""):
                raise ValueError(f"invalid coordinate name {name!r}")
            if name in FUNCTION_NAMES:
                raise ValueError(f"coordinate name {name!r} collides with a function")
            if name in seen:
                raise ValueError(f"duplicate coordinate name {name!r}")
            seen.add(name)

    @property
    def dim(self) -> int:
        return len(self.coord_names)


@dataclass(frozen=True)
class ScalarExpr:
    """A parsed scalar expression over a chart with ``arity`` coordinates."""

    root: Node
    arity: int

    def eval(self, point) -> float:
        """Value at the point; raises DomainError on singular operations."""
        pt = _as_floats(point, self.arity)
        v = _eval_float(self.root, pt)
        if not math.isfinite(v):
            raise DomainError(f"non-finite value of '{to_string(self.root)}'")
        return v

    def eval_dual(self, point, direction) -> tuple[float, float]:
        """(value, directional derivative) at the point, exact chain rule."""
        pt = _as_floats(point, self.arity)
        dr = _as_floats(direction, self.arity)
        d = _eval_dual(self.root, pt, dr)
        if not (math.isfinite(d.value) and math.isfinite(d.deriv)):
            raise DomainError(f"non-finite evaluation of '{to_string(self.root)}'")
        return d.value, d.deriv

    def gradient(self, point) -> np.ndarray:
        """All partials, one dual sweep per coordinate."""
        n = self.arity
        out = np.empty(n)
        direction = [0.0] * n
        for i in range(n):
            direction[i] = 1.0
            out[i] = self.eval_dual(point, direction)[1]
            direction[i] = 0.0
        return out

    def is_constant(self) -> bool:
        return not _has_var(self.root)

    def to_string(self) -> str:
        return to_string(self.root)


def _as_floats(values, n: int) -> list[float]:
    vals = [float(x) for x in values]
    if len(vals) != n:
        raise ValueError(f"expected a vector of length {n}, got {len(vals)}")
    return vals


def _has_var(node: Node) -> bool:
    if isinstance(node, Var):
        return True
    if isinstance(node, Neg):
        return _has_var(node.operand)
    if isinstance(node, BinOp):
        return _has_var(node.left) or _has_var(node.right)
    if isinstance(node, Call):
        return _has_var(node.arg)
    return False


# ---------------------------------------------------------------------------
# Parsing (recursive descent over a small token stream)


class _Tokens:
    def __init__(self, text: str):
        self.text = text
        self.items: list[tuple[str, str, int]] = []  # (kind, value, position)
        pos = 0
        while pos < len(text):
            ch = text[pos]
            if ch.isspace():
                pos += 1
                continue
            m = _NUMBER_RE.match(text, pos)
            if m:
                self.items.append(("number", m.group(), pos))
                pos = m.end()
                continue
            m = _IDENT_RE.match(text, pos)
            if m:
                self.items.append(("ident", m.group(), pos))
                pos = m.end()
                continue
            if ch in "+-*/^()":
                self.items.append((ch, ch, pos))
                pos += 1
                continue
            raise ExprSyntaxError(f"unexpected character {ch!r}", pos)
        self.items.append(("end", "", len(text)))
        self.cursor = 0

    def peek(self) -> tuple[str, str, int]:
        return self.items[self.cursor]

    def advance(self) -> tuple[str, str, int]:
        tok = self.items[self.cursor]
        self.cursor += 1
        return tok

    def expect(self, kind: str, what: str) -> tuple[str, str, int]:
        tok = self.peek()
        if tok[0] != kind:
            got = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ExprSyntaxError(f"expected {what}, got {got}", tok[2])
        return self.advance()


def parse_expr(text: str, chart: Chart) -> ScalarExpr:
    """Parse expression text against a chart.

    Standard precedence (^ above unary minus above * / above + -),
    left-associative + - * /, right-associative ^.
    """
    if not text or not text.strip():
        raise ExprSyntaxError("empty expression", 0)
    tokens = _Tokens(text)
    index_of = {name: i for i, name in enumerate(chart.coord_names)}
    root = _parse_sum(tokens, index_of)
    tok = tokens.peek()
    if tok[0] != "end":
        raise ExprSyntaxError(f"unexpected trailing input {tok[1]!r}", tok[2])
    return ScalarExpr(root=root, arity=chart.dim)


def _parse_sum(tokens: _Tokens, index_of: dict) -> Node:
    node = _parse_term(tokens, index_of)
    while tokens.peek()[0] in ("+", "-"):
        op = tokens.advance()[0]
        node = BinOp(op, node, _parse_term(tokens, index_of))
    return node


def _parse_term(tokens: _Tokens, index_of: dict) -> Node:
    node = _parse_factor(tokens, index_of)
    while tokens.peek()[0] in ("*", "/"):
        op = tokens.advance()[0]
        node = BinOp(op, node, _parse_factor(tokens, index_of))
    return node


def _parse_factor(tokens: _Tokens, index_of: dict) -> Node:
    if tokens.peek()[0] == "-":
        tokens.advance()
        return Neg(_parse_power(tokens, index_of))
    return _parse_power(tokens, index_of)


def _parse_power(tokens: _Tokens, index_of: dict) -> Node:
    base = _parse_atom(tokens, index_of)
    if tokens.peek()[0] == "^":
        tokens.advance()
        return BinOp("^", base, _parse_factor(tokens, index_of))
    return base


def _parse_atom(tokens: _Tokens, index_of: dict) -> Node:
    kind, value, pos = tokens.peek()
    if kind == "number":
        tokens.advance()
        return Const(float(value))
    if kind == "ident":
        tokens.advance()
        if value in index_of:
            return Var(index_of[value], value)
        if value in FUNCTION_NAMES:
            tokens.expect("(", f"'(' after function '{value}'")
            arg = _parse_sum(tokens, index_of)
            tokens.expect(")", "')'")
            return Call(value, arg)
        raise UnknownSymbolError(value, pos)
    if kind == "(":
        tokens.advance()
        node = _parse_sum(tokens, index_of)
        tokens.expect(")", "')'")
        return node
    got = "end of input" if kind == "end" else repr(value)
    raise ExprSyntaxError(f"expected a number, coordinate, function or '(', got {got}", pos)


# ---------------------------------------------------------------------------
# Evaluation


def _eval_float(node: Node, point: list) -> float:
    if isinstance(node, Const):
        return node.value
    if isinstance(node, Var):
        return point[node.index]
    if isinstance(node, Neg):
        return -_eval_float(node.operand, point)
    if isinstance(node, BinOp):
        left = _eval_float(node.left, point)
        if node.op == "^":
            return _pow_float(left, _eval_float(node.right, point), node)
        right = _eval_float(node.right, point)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        if right == 0.0:
            raise DomainError(f"division by zero in '{to_string(node)}'")
        return left / right
    arg = _eval_float(node.arg, point)
    return _apply_float(node, arg)


def _apply_float(node: Call, arg: float) -> float:
    if node.func == "sin":
        return math.sin(arg)
    if node.func == "cos":
        return math.cos(arg)
    if node.func == "exp":
        try:
            return math.exp(arg)
        except OverflowError:
            raise DomainError(f"overflow in '{to_string(node)}'") from None
    if arg <= 0.0:
        raise DomainError(f"{node.func} of non-positive argument in '{to_string(node)}'")
    return math.log(arg) if node.func == "log" else math.sqrt(arg)


def _pow_float(base: float, expo: float, node: BinOp) -> float:
    rounded = round(expo)
    if abs(expo - rounded) < _INT_EXPONENT_TOL:
        n = int(rounded)
        if n < 0 and base == 0.0:
            raise DomainError(f"zero base with negative exponent in '{to_string(node)}'")
        return _ipow(base, n)
    if base <= 0.0:
        raise DomainError(
            f"non-integer exponent needs a positive base in '{to_string(node)}'"
        )
    try:
        return math.pow(base, expo)
    except OverflowError:
        raise DomainError(f"overflow in '{to_string(node)}'") from None


def _ipow(base: float, n: int) -> float:
    if n < 0:
        return 1.0 / _ipow(base, -n)
    result = 1.0
    b = base
    while n > 0:
        if n & 1:
            result *= b
        b *= b
        n >>= 1
    return result


def _eval_dual(node: Node, point: list, direction: list) -> Dual:
    if isinstance(node, Const):
        return Dual(node.value, 0.0)
    if isinstance(node, Var):
        return Dual(point[node.index], direction[node.index])
    if isinstance(node, Neg):
        return -_eval_dual(node.operand, point, direction)
    if isinstance(node, BinOp):
        left = _eval_dual(node.left, point, direction)
        right = _eval_dual(node.right, point, direction)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        if node.op == "/":
            if right.value == 0.0:
                raise DomainError(f"division by zero in '{to_string(node)}'")
            return left / right
        return _pow_dual(left, right, node)
    arg = _eval_dual(node.arg, point, direction)
    if node.func == "sin":
        return dual.sin(arg)
    if node.func == "cos":
        return dual.cos(arg)
    if node.func == "exp":
        try:
            return dual.exp(arg)
        except OverflowError:
            raise DomainError(f"overflow in '{to_string(node)}'") from None
    if arg.value <= 0.0:
        raise DomainError(f"{node.func} of non-positive argument in '{to_string(node)}'")
    return dual.log(arg) if node.func == "log" else dual.sqrt(arg)


def _pow_dual(base: Dual, expo: Dual, node: BinOp) -> Dual:
    rounded = round(expo.value)
    if expo.deriv == 0.0 and abs(expo.value - rounded) < _INT_EXPONENT_TOL:
        n = int(rounded)
        if n < 0 and base.value == 0.0:
            raise DomainError(f"zero base with negative exponent in '{to_string(node)}'")
        return dual.powi(base, n)
    if base.value <= 0.0:
        raise DomainError(
            f"non-integer exponent needs a positive base in '{to_string(node)}'"
        )
    try:
        return dual.powf(base, expo)
    except OverflowError:
        raise DomainError(f"overflow in '{to_string(node)}'") from None


# ---------------------------------------------------------------------------
# Canonical rendering (parse(to_string(ast)) reproduces ast for parsed input)

_BIN_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}
# context the child must meet on each side without parentheses
_CHILD_CTX = {"+": (1, 2), "-": (1, 2), "*": (2, 3), "/": (2, 3), "^": (5, 3)}


def to_string(node: Node) -> str:
    return _render(node, 0)


def _node_prec(node: Node) -> int:
    if isinstance(node, BinOp):
        return _BIN_PREC[node.op]
    if isinstance(node, Neg):
        return 3
    if isinstance(node, Const) and node.value < 0:
        return 3  # renders with a leading minus
    return 6


def _render(node: Node, ctx: int) -> str:
    prec = _node_prec(node)
    if isinstance(node, Const):
        text = repr(node.value) if node.value >= 0 else "-" + repr(-node.value)
    elif isinstance(node, Var):
        text = node.name
    elif isinstance(node, Neg):
        text = "-" + _render(node.operand, 4)
    elif isinstance(node, Call):
        text = f"{node.func}({_render(node.arg, 0)})"
    else:
        lctx, rctx = _CHILD_CTX[node.op]
        left = _render(node.left, lctx)
        right = _render(node.right, rctx)
        text = f"{left}^{right}" if node.op == "^" else f"{left} {node.op} {right}"
    return f"({text})" if prec < ctx else text
