"""Expression language for user-defined potentials F(t, x).

Sources are parsed by recursive descent into a small AST over the fixed
variables t1..tp, x1..xn, the constant pi, the operators + - * / ^ and the
functions sin, cos, exp, sqrt.  Precedence, tightest first: ^ (right
associative), unary minus, * /, + - (left associative).

Evaluation runs forward-mode on dual numbers whose payloads are numpy
arrays, so one pass over a grid batch yields F and the exact gradient
grad_x F simultaneously.  Only x-derivatives are propagated; t enters as a
constant for each evaluation.  Every failure mode is a positioned
ExprError: lexical, syntactic, unknown identifier, or a numeric domain
error pointing at the offending AST node.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .potential import GrowthEnvelope, Potential

__all__ = [
    "ExprError",
    "EvalDomainError",
    "Token",
    "tokenize",
    "Const",
    "Var",
    "Neg",
    "BinOp",
    "Call",
    "parse",
    "Dual",
    "eval_dual",
    "eval_value",
    "pretty",
    "line_col",
    "ExpressionPotential",
]

FUNCTIONS = ("sin", "cos", "exp", "sqrt")


class ExprError(ValueError):
    """Expression failure with a byte offset into the source."""

    def __init__(self, message: str, pos: int):
        self.message = message
        self.pos = pos
        super().__init__(f"{message} (offset {pos})")


class EvalDomainError(ExprError):
    """Numeric domain failure at an AST node; ``element`` is the flat index
    of the first offending batch element, if the evaluation was batched."""

    def __init__(self, message: str, pos: int, element: int | None = None):
        super().__init__(message, pos)
        self.element = element


def line_col(source: str, pos: int) -> tuple[int, int]:
    """1-based (line, column) of a byte offset."""
    prefix = source[:pos]
    return prefix.count("\n") + 1, pos - prefix.rfind("\n")


@dataclass(frozen=True)
class Token:
    kind: str  # number | ident | op | lparen | rparen | comma | end
    text: str
    pos: int


def tokenize(source: str) -> list[Token]:
    """Full tokenization, or an ExprError carrying the offending offset."""
    tokens: list[Token] = []
    i = 0
    size = len(source)
    while i < size:
        c = source[i]
        if c.isspace():
            i += 1
            continue
        if c.isdigit():
            j = i + 1
            while j < size and source[j].isdigit():
                j += 1
            if j < size and source[j] == "." and j + 1 < size and source[j + 1].isdigit():
                j += 1
                while j < size and source[j].isdigit():
                    j += 1
            if j < size and source[j] in "eE":
                k = j + 1
                if k < size and source[k] in "+-":
                    k += 1
                if k < size and source[k].isdigit():
                    j = k + 1
                    while j < size and source[j].isdigit():
                        j += 1
            text = source[i:j]
            if not math.isfinite(float(text)):
                raise ExprError(f"number literal {text!r} overflows", i)
            tokens.append(Token("number", text, i))
            i = j
            continue
        if c.isalpha() or c == "_":
            j = i + 1
            while j < size and (source[j].isalnum() or source[j] == "_"):
                j += 1
            tokens.append(Token("ident", source[i:j], i))
            i = j
            continue
        if c in "+-*/^":
            tokens.append(Token("op", c, i))
        elif c == "(":
            tokens.append(Token("lparen", c, i))
        elif c == ")":
            tokens.append(Token("rparen", c, i))
        elif c == ",":
            tokens.append(Token("comma", c, i))
        else:
            raise ExprError(f"illegal character {c!r}", i)
        i += 1
    tokens.append(Token("end", "", size))
    return tokens


@dataclass(frozen=True)
class Const:
    value: float
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Var:
    kind: str  # "t" or "x"
    index: int  # 0-based
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Neg:
    arg: "Node"
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str  # + - * / ^
    left: "Node"
    right: "Node"
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Call:
    fn: str
    arg: "Node"
    pos: int = field(default=0, compare=False)


Node = Const | Var | Neg | BinOp | Call


class _Parser:
    def __init__(self, tokens: list[Token], p: int, n: int):
        self.tokens = tokens
        self.i = 0
        self.p = p
        self.n = n

    @property
    def cur(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, what: str) -> Token:
        if self.cur.kind != kind:
            got = self.cur.text or "end of input"
            raise ExprError(f"expected {what}, found {got!r}", self.cur.pos)
        return self.advance()

    def expression(self) -> Node:
        node = self.term()
        while self.cur.kind == "op" and self.cur.text in "+-":
            tok = self.advance()
            node = BinOp(tok.text, node, self.term(), pos=tok.pos)
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.cur.kind == "op" and self.cur.text in "*/":
            tok = self.advance()
            node = BinOp(tok.text, node, self.unary(), pos=tok.pos)
        return node

    def unary(self) -> Node:
        if self.cur.kind == "op" and self.cur.text == "-":
            tok = self.advance()
            return Neg(self.unary(), pos=tok.pos)
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.cur.kind == "op" and self.cur.text == "^":
            tok = self.advance()
            # exponent re-enters at unary level: right associative, and it
            # admits a leading minus (x^-2)
            return BinOp("^", base, self.unary(), pos=tok.pos)
        return base

    def atom(self) -> Node:
        tok = self.cur
        if tok.kind == "number":
            self.advance()
            return Const(float(tok.text), pos=tok.pos)
        if tok.kind == "lparen":
            self.advance()
            node = self.expression()
            self.expect("rparen", "')'")
            return node
        if tok.kind == "ident":
            self.advance()
            return self.identifier(tok)
        got = tok.text or "end of input"
        raise ExprError(f"expected a value, found {got!r}", tok.pos)

    def identifier(self, tok: Token) -> Node:
        name = tok.text
        if name == "pi":
            return Const(math.pi, pos=tok.pos)
        if name in FUNCTIONS:
            self.expect("lparen", f"'(' after {name}")
            arg = self.expression()
            if self.cur.kind == "comma":
                raise ExprError(f"{name} takes a single argument", self.cur.pos)
            self.expect("rparen", "')'")
            return Call(name, arg, pos=tok.pos)
        if len(name) >= 2 and name[0] in "tx" and name[1] != "0" and name[1:].isdigit():
            index = int(name[1:])
            bound = self.p if name[0] == "t" else self.n
            if index > bound:
                raise ExprError(
                    f"variable {name!r} exceeds declared "
                    f"{'t1..t%d' % self.p if name[0] == 't' else 'x1..x%d' % self.n}",
                    tok.pos,
                )
            return Var(name[0], index - 1, pos=tok.pos)
        raise ExprError(f"unknown identifier {name!r}", tok.pos)


def parse(tokens: list[Token] | str, p: int, n: int) -> Node:
    """Parse a token stream (or source text) against p time and n space
    variables.  Raises ExprError with a position on any malformed input."""
    if isinstance(tokens, str):
        tokens = tokenize(tokens)
    parser = _Parser(tokens, p, n)
    node = parser.expression()
    if parser.cur.kind != "end":
        raise ExprError(f"unexpected {parser.cur.text!r} after expression", parser.cur.pos)
    return node


class Dual:
    """Forward-mode pair: ``value`` with shape (...) and ``partials`` with
    shape (..., n), the derivatives with respect to x1..xn."""

    __slots__ = ("value", "partials")

    def __init__(self, value: np.ndarray, partials: np.ndarray):
        self.value = value
        self.partials = partials


def _first_bad(mask: np.ndarray) -> int:
    return int(np.flatnonzero(np.asarray(mask).ravel())[0])


def _require_finite(node: Node, value: np.ndarray) -> None:
    bad = ~np.isfinite(value)
    if np.any(bad):
        raise EvalDomainError("non-finite result", node.pos, _first_bad(bad))


class _Evaluator:
    """Shared tree walker; with_partials=False skips tangent arithmetic."""

    def __init__(self, t: np.ndarray, x: np.ndarray, with_partials: bool):
        t = np.asarray(t, dtype=np.float64)
        x = np.asarray(x, dtype=np.float64)
        self.batch = np.broadcast_shapes(t.shape[:-1], x.shape[:-1])
        self.t = t
        self.x = x
        self.n = x.shape[-1]
        self.with_partials = with_partials

    def lift(self, value, partials=None) -> Dual:
        value = np.broadcast_to(np.asarray(value, dtype=np.float64), self.batch)
        if not self.with_partials:
            return Dual(value, None)
        if partials is None:
            partials = np.zeros(self.batch + (self.n,))
        return Dual(value, partials)

    def run(self, node: Node) -> Dual:
        if isinstance(node, Const):
            return self.lift(np.full(self.batch, node.value))
        if isinstance(node, Var):
            if node.kind == "t":
                return self.lift(self.t[..., node.index])
            value = np.broadcast_to(self.x[..., node.index], self.batch)
            if not self.with_partials:
                return Dual(value, None)
            partials = np.zeros(self.batch + (self.n,))
            partials[..., node.index] = 1.0
            return Dual(value, partials)
        if isinstance(node, Neg):
            a = self.run(node.arg)
            return Dual(-a.value, -a.partials if self.with_partials else None)
        if isinstance(node, Call):
            return self.call(node)
        if isinstance(node, BinOp):
            return self.binop(node)
        raise TypeError(f"not an AST node: {node!r}")  # pragma: no cover

    def chain(self, value, slope, arg: Dual) -> Dual:
        if not self.with_partials:
            return Dual(value, None)
        return Dual(value, np.asarray(slope)[..., np.newaxis] * arg.partials)

    def call(self, node: Call) -> Dual:
        a = self.run(node.arg)
        if node.fn == "sin":
            return self.chain(np.sin(a.value), np.cos(a.value), a)
        if node.fn == "cos":
            return self.chain(np.cos(a.value), -np.sin(a.value), a)
        if node.fn == "exp":
            with np.errstate(over="ignore"):
                value = np.exp(a.value)
            _require_finite(node, value)
            return self.chain(value, value, a)
        # sqrt
        neg = a.value < 0.0
        if np.any(neg):
            raise EvalDomainError("sqrt of a negative value", node.pos, _first_bad(neg))
        value = np.sqrt(a.value)
        if not self.with_partials:
            return Dual(value, None)
        zero = a.value == 0.0
        if np.any(zero) and np.any(a.partials[zero] != 0.0):
            raise EvalDomainError("sqrt is not differentiable at zero", node.pos, _first_bad(zero))
        with np.errstate(divide="ignore"):
            slope = np.where(zero, 0.0, 0.5 / np.where(zero, 1.0, value))
        return self.chain(value, slope, a)

    def binop(self, node: BinOp) -> Dual:
        if node.op == "^":
            return self.power(node)
        a = self.run(node.left)
        b = self.run(node.right)
        wp = self.with_partials
        if node.op == "+":
            return Dual(a.value + b.value, a.partials + b.partials if wp else None)
        if node.op == "-":
            return Dual(a.value - b.value, a.partials - b.partials if wp else None)
        if node.op == "*":
            value = a.value * b.value
            if not wp:
                return Dual(value, None)
            return Dual(
                value,
                a.partials * b.value[..., np.newaxis] + b.partials * a.value[..., np.newaxis],
            )
        # division
        zero = b.value == 0.0
        if np.any(zero):
            raise EvalDomainError("division by zero", node.pos, _first_bad(zero))
        value = a.value / b.value
        if not wp:
            return Dual(value, None)
        partials = (
            a.partials * b.value[..., np.newaxis] - b.partials * a.value[..., np.newaxis]
        ) / (b.value**2)[..., np.newaxis]
        return Dual(value, partials)

    @staticmethod
    def _const_int(node: Node) -> int | None:
        sign = 1
        while isinstance(node, Neg):
            sign = -sign
            node = node.arg
        if isinstance(node, Const) and float(node.value).is_integer() and abs(node.value) <= 128:
            return sign * int(node.value)
        return None

    def power(self, node: BinOp) -> Dual:
        base = self.run(node.left)
        k = self._const_int(node.right)
        if k is not None:
            return self.int_power(node, base, k)
        expo = self.run(node.right)
        nonpos = base.value <= 0.0
        if np.any(nonpos):
            raise EvalDomainError(
                "'^' with a non-integer exponent needs a positive base",
                node.pos,
                _first_bad(nonpos),
            )
        # a^b = exp(b log a), propagated through the existing primitives
        log_base = self.chain(np.log(base.value), 1.0 / base.value, base)
        if self.with_partials:
            inner = Dual(
                expo.value * log_base.value,
                expo.partials * log_base.value[..., np.newaxis]
                + log_base.partials * expo.value[..., np.newaxis],
            )
        else:
            inner = Dual(expo.value * log_base.value, None)
        with np.errstate(over="ignore"):
            value = np.exp(inner.value)
        _require_finite(node, value)
        return self.chain(value, value, inner)

    def int_power(self, node: BinOp, base: Dual, k: int) -> Dual:
        if k == 0:
            return self.lift(np.ones(self.batch))
        if k < 0:
            zero = base.value == 0.0
            if np.any(zero):
                raise EvalDomainError(
                    "zero base with a negative exponent", node.pos, _first_bad(zero)
                )
        out = base
        for _ in range(abs(k) - 1):
            if self.with_partials:
                out = Dual(
                    out.value * base.value,
                    out.partials * base.value[..., np.newaxis]
                    + base.partials * out.value[..., np.newaxis],
                )
            else:
                out = Dual(out.value * base.value, None)
        if k < 0:
            value = 1.0 / out.value
            if not self.with_partials:
                return Dual(value, None)
            return Dual(value, -out.partials * (value**2)[..., np.newaxis])
        return out


def eval_dual(ast: Node, t: np.ndarray, x: np.ndarray) -> Dual:
    """Evaluate F and grad_x F together.

    ``t`` has shape (..., p) and ``x`` shape (..., n); the result carries
    ``value`` with the broadcast batch shape and ``partials`` with a
    trailing component axis.
    """
    return _Evaluator(t, x, with_partials=True).run(ast)


def eval_value(ast: Node, t: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Evaluate F only (cheaper than eval_dual inside line searches)."""
    return _Evaluator(t, x, with_partials=False).run(ast).value


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}


def _prec(node: Node) -> int:
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return 3
    return 5


def pretty(node: Node) -> str:
    """Minimal-parentheses rendering; reparsing yields an equal AST."""
    if isinstance(node, Const):
        return "pi" if node.value == math.pi else repr(node.value)
    if isinstance(node, Var):
        return f"{node.kind}{node.index + 1}"
    if isinstance(node, Call):
        return f"{node.fn}({pretty(node.arg)})"
    if isinstance(node, Neg):
        inner = pretty(node.arg)
        if _prec(node.arg) < 3:
            inner = f"({inner})"
        return f"-{inner}"
    mine = _PREC[node.op]
    left, right = pretty(node.left), pretty(node.right)
    if node.op == "^":
        if _prec(node.left) <= mine:
            left = f"({left})"
        if _prec(node.right) < mine:
            right = f"({right})"
    else:
        if _prec(node.left) < mine:
            left = f"({left})"
        if _prec(node.right) <= mine:
            right = f"({right})"
    return f"{left} {node.op} {right}"


class ExpressionPotential(Potential):
    """Potential defined by an expression over t1..tp, x1..xn."""

    name = "expr"

    def __init__(
        self,
        source: str,
        p: int,
        n: int,
        periods=None,
        positivity_claim: bool = False,
        growth: GrowthEnvelope | None = None,
    ):
        self.source = source
        self.ast = parse(tokenize(source), p, n)
        self.p = p
        self.n = n
        self.periods = None if periods is None else np.atleast_1d(
            np.asarray(periods, dtype=np.float64)
        )
        if self.periods is not None and self.periods.size != n:
            raise ValueError(f"expected {n} periods, got {self.periods.size}")
        self.positivity_claim = positivity_claim
        self.growth = growth

    def value(self, t, x):
        return eval_value(self.ast, t, x)

    def gradient(self, t, x):
        return eval_dual(self.ast, t, x).partials
