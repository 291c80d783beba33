"""Small arithmetic expression language for right-hand sides.

Variables t, u, v (v stands for the derivative u'), the binary operators
+ - * / ^ with ^ binding tightest and associating to the right, unary minus,
a fixed catalog of functions, and the constants pi and e.  Parsing is by
recursive descent over a hand-rolled tokenizer; errors carry the byte offset
into the source string.

Grammar:

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | power
    power  := atom ('^' factor)?
    atom   := NUMBER | NAME | NAME '(' expr ')' | '(' expr ')'

So -x^2 parses as -(x^2) and 2^3^2 as 2^(3^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import ExpressionSyntaxError, UnknownIdentifier

__all__ = [
    "Node", "Num", "Var", "Unary", "Binary", "Call",
    "parse", "evaluate", "as_callable", "to_source",
    "VARIABLES", "FUNCTIONS", "CONSTANTS",
]

VARIABLES = ("t", "u", "v")
FUNCTIONS = {
    "sin": np.sin, "cos": np.cos, "tan": np.tan,
    "exp": np.exp, "log": np.log, "sqrt": np.sqrt,
    "abs": np.abs, "atan": np.arctan,
}
CONSTANTS = {"pi": math.pi, "e": math.e}


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str  # only '-'
    operand: "Node"


@dataclass(frozen=True)
class Binary:
    op: str  # one of + - * / ^
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"


Node = Union[Num, Var, Unary, Binary, Call]


# ----------------------------------------------------------------- tokenizer

_OPS = set("+-*/^()")


@dataclass(frozen=True)
class _Token:
    kind: str  # 'num' | 'name' | 'op' | 'end'
    text: str
    pos: int


def _tokenize(src: str) -> list[_Token]:
    out: list[_Token] = []
    i = 0
    n = len(src)
    while i < n:
        ch = src[i]
        if ch in " \t\r\n":
            i += 1
            continue
        if ch in _OPS:
            out.append(_Token("op", ch, i))
            i += 1
            continue
        if ch.isdigit() or ch == ".":
            j = i
            seen_dot = False
            while j < n and (src[j].isdigit() or (src[j] == "." and not seen_dot)):
                seen_dot = seen_dot or src[j] == "."
                j += 1
            if j < n and src[j] in "eE":
                k = j + 1
                if k < n and src[k] in "+-":
                    k += 1
                if k < n and src[k].isdigit():
                    while k < n and src[k].isdigit():
                        k += 1
                    j = k
            text = src[i:j]
            try:
                float(text)
            except ValueError:
                raise ExpressionSyntaxError(
                    f"malformed number {text!r}", position=i) from None
            out.append(_Token("num", text, i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (src[j].isalnum() or src[j] == "_"):
                j += 1
            out.append(_Token("name", src[i:j], i))
            i = j
            continue
        raise ExpressionSyntaxError(f"unexpected character {ch!r}", position=i)
    out.append(_Token("end", "", n))
    return out


# -------------------------------------------------------------------- parser

class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.tokens = _tokenize(src)
        self.i = 0

    @property
    def cur(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str) -> None:
        if self.cur.kind == "op" and self.cur.text == op:
            self.advance()
            return
        raise ExpressionSyntaxError(
            f"expected {op!r}", position=self.cur.pos, expected=op)

    def parse(self) -> Node:
        node = self.expr()
        if self.cur.kind != "end":
            raise ExpressionSyntaxError(
                f"unexpected trailing input {self.cur.text!r}",
                position=self.cur.pos)
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.cur.kind == "op" and self.cur.text in "+-":
            op = self.advance().text
            node = Binary(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.cur.kind == "op" and self.cur.text in "*/":
            op = self.advance().text
            node = Binary(op, node, self.factor())
        return node

    def factor(self) -> Node:
        if self.cur.kind == "op" and self.cur.text == "-":
            self.advance()
            return Unary("-", self.factor())
        return self.power()

    def power(self) -> Node:
        node = self.atom()
        if self.cur.kind == "op" and self.cur.text == "^":
            self.advance()
            return Binary("^", node, self.factor())
        return node

    def atom(self) -> Node:
        tok = self.cur
        if tok.kind == "num":
            self.advance()
            return Num(float(tok.text))
        if tok.kind == "name":
            self.advance()
            if self.cur.kind == "op" and self.cur.text == "(":
                if tok.text not in FUNCTIONS:
                    raise UnknownIdentifier(
                        f"unknown function {tok.text!r}", position=tok.pos)
                self.advance()
                arg = self.expr()
                self.expect_op(")")
                return Call(tok.text, arg)
            if tok.text in VARIABLES:
                return Var(tok.text)
            if tok.text in CONSTANTS:
                return Num(CONSTANTS[tok.text])
            raise UnknownIdentifier(
                f"unknown identifier {tok.text!r}", position=tok.pos)
        if tok.kind == "op" and tok.text == "(":
            self.advance()
            node = self.expr()
            self.expect_op(")")
            return node
        shown = tok.text if tok.kind != "end" else "end of input"
        raise ExpressionSyntaxError(
            f"expected a value, got {shown!r}" if tok.kind != "end"
            else "unexpected end of input", position=tok.pos)


def parse(src: str) -> Node:
    return _Parser(src).parse()


# ----------------------------------------------------------------- evaluator

def evaluate(node: Node, t, u, v):
    """Tree-walking evaluation; accepts scalars or numpy arrays."""
    env = {"t": t, "u": u, "v": v}
    return _eval(node, env)


def _eval(node: Node, env: dict):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return env[node.name]
    if isinstance(node, Unary):
        return -_eval(node.operand, env)
    if isinstance(node, Call):
        return FUNCTIONS[node.func](_eval(node.arg, env))
    if isinstance(node, Binary):
        lhs = _eval(node.left, env)
        rhs = _eval(node.right, env)
        if node.op == "+":
            return lhs + rhs
        if node.op == "-":
            return lhs - rhs
        if node.op == "*":
            return lhs * rhs
        if node.op == "/":
            return lhs / rhs
        return np.power(lhs, rhs)
    raise TypeError(f"not an expression node: {node!r}")


def as_callable(node: Node) -> Callable:
    """Compile the tree into a plain python function (t, u, v) -> value.

    Arguments are coerced with np.asarray so mixed scalar/array calls
    broadcast; a scalar result is handed back as a python float.
    """
    body = _emit(node)
    namespace = {"np": np}
    code = (
        "def _compiled(t, u, v):\n"
        "    t = np.asarray(t, dtype=float)\n"
        "    u = np.asarray(u, dtype=float)\n"
        "    v = np.asarray(v, dtype=float)\n"
        f"    _r = {body}\n"
        "    _r = np.asarray(_r, dtype=float)\n"
        "    return float(_r) if _r.ndim == 0 else _r\n"
    )
    exec(code, namespace)
    return namespace["_compiled"]


def _emit(node: Node) -> str:
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Unary):
        return f"(-{_emit(node.operand)})"
    if isinstance(node, Call):
        fn = "np.arctan" if node.func == "atan" else f"np.{node.func}"
        return f"{fn}({_emit(node.arg)})"
    if isinstance(node, Binary):
        if node.op == "^":
            return f"np.power({_emit(node.left)}, {_emit(node.right)})"
        return f"({_emit(node.left)} {node.op} {_emit(node.right)})"
    raise TypeError(f"not an expression node: {node!r}")


# ------------------------------------------------------------------- printer

# Effective precedence of a rendered construct: sums 1, products 2, unary
# minus 3 (factor level), '^' 4, atoms 5.  Each operand slot of the grammar
# admits constructs down to a minimum precedence without parentheses; below
# that a re-parse would group differently, so we wrap.
_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}
_MIN_LEFT = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 5}
_MIN_RIGHT = {"+": 2, "-": 2, "*": 3, "/": 3, "^": 3}


def to_source(node: Node) -> str:
    """Render with the minimal parentheses that survive a re-parse with the
    identical tree: parse(to_source(n)) == n for any n a parse can produce."""
    return _render(node, 0)


def _node_prec(node: Node) -> int:
    if isinstance(node, Binary):
        return 4 if node.op == "^" else _PREC[node.op]
    if isinstance(node, Unary):
        return 3
    return 5


def _render(node: Node, min_prec: int) -> str:
    text = _render_bare(node)
    if _node_prec(node) < min_prec:
        return f"({text})"
    return text


def _render_bare(node: Node) -> str:
    if isinstance(node, Num):
        if node.value == math.pi:
            return "pi"
        if node.value == math.e:
            return "e"
        text = repr(node.value)
        if text.endswith(".0"):
            text = text[:-2]
        # a parse never yields a negative literal (that's a Unary); guard
        # anyway so hand-built trees still print evaluable source
        if node.value < 0:
            return f"({text})"
        return text
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Call):
        return f"{node.func}({_render(node.arg, 0)})"
    if isinstance(node, Unary):
        return f"-{_render(node.operand, 3)}"
    if isinstance(node, Binary):
        left = _render(node.left, _MIN_LEFT[node.op])
        right = _render(node.right, _MIN_RIGHT[node.op])
        return f"{left} {node.op} {right}"
    raise TypeError(f"not an expression node: {node!r}")
