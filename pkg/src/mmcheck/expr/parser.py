"""Recursive descent parser for real functions of one variable ``x``.

Grammar (lowest to highest precedence)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := '-' unary | power
    power   := atom ('^' unary)?          # right associative
    atom    := NUMBER | 'x' | '(' expr ')' | NAME '(' expr (',' expr)* ')'

Known function names are ``sqrt``, ``log``, ``exp`` (one argument) and
``pow`` (two arguments).  ``-x^2`` parses as ``-(x^2)`` and ``2^-1`` as
``2^(-1)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from mmcheck.errors import ParseError

FUNCTIONS = {"sqrt": 1, "log": 1, "exp": 1, "pow": 2}

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^(),]))"
)


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class Binary:
    op: str  # one of + - * / ^
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple


Node = Union[Num, Var, Neg, Binary, Call]

_OP_NAMES = {"+": "add", "-": "sub", "*": "mul", "/": "div", "^": "pow"}


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, text, pos = self.take()
        if text != value or kind == "end":
            what = "end of input" if kind == "end" else repr(text)
            raise ParseError(f"expected {value!r}, found {what}", pos)

    def parse(self):
        node = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected token {text!r}", pos)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = Binary(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            node = Binary(op, node, self.unary())
        return node

    def unary(self):
        if self.peek()[0] == "op" and self.peek()[1] == "-":
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            return Binary("^", base, self.unary())
        return base

    def atom(self):
        kind, text, pos = self.take()
        if kind == "num":
            return Num(float(text))
        if kind == "name":
            if text == "x":
                return Var()
            if text not in FUNCTIONS:
                raise ParseError(f"unknown identifier {text!r}", pos)
            self.expect("(")
            args = [self.expr()]
            while self.peek()[1] == ",":
                self.take()
                args.append(self.expr())
            self.expect(")")
            if len(args) != FUNCTIONS[text]:
                raise ParseError(
                    f"{text} takes {FUNCTIONS[text]} argument(s), got {len(args)}", pos
                )
            return Call(text, tuple(args))
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect(")")
            return node
        what = "end of input" if kind == "end" else repr(text)
        raise ParseError(f"unexpected {what}", pos)


def parse(text: str) -> Node:
    """Parse ``text`` into an expression tree.

    >>> sexpr(parse("x^2 + 3*x"))
    'add(pow(x,2),mul(3,x))'
    """
    return _Parser(text).parse()


def _num_text(v):
    return repr(int(v)) if v.is_integer() and abs(v) < 1e15 else repr(v)


def unparse(node: Node) -> str:
    """Fully parenthesized text that parses back to ``node``."""
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Neg):
        return f"(-{unparse(node.operand)})"
    if isinstance(node, Binary):
        return f"({unparse(node.left)}{node.op}{unparse(node.right)})"
    return f"{node.name}({','.join(unparse(a) for a in node.args)})"


def sexpr(node: Node) -> str:
    """Compact prefix form used in messages and tests."""
    if isinstance(node, Num):
        return _num_text(node.value)
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Neg):
        return f"neg({sexpr(node.operand)})"
    if isinstance(node, Binary):
        return f"{_OP_NAMES[node.op]}({sexpr(node.left)},{sexpr(node.right)})"
    return f"{node.name}({','.join(sexpr(a) for a in node.args)})"


def depends_on_x(node: Node) -> bool:
    if isinstance(node, Var):
        return True
    if isinstance(node, Num):
        return False
    if isinstance(node, Neg):
        return depends_on_x(node.operand)
    if isinstance(node, Binary):
        return depends_on_x(node.left) or depends_on_x(node.right)
    return any(depends_on_x(a) for a in node.args)
