"""A small expression grammar for user-supplied disk maps.

Grammar (infix, left associative):

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := ('+' | '-') factor | atom
    atom   := NUMBER | 'i' | 'z' | FUNC '(' expr ')' | '(' expr ')'
    FUNC   := 'conj' | 'exp' | 'sinh' | 'cosh' | 'tanh'

Jets come from symbolic Wirtinger differentiation of the parsed tree: z and
conj(z) are the independent first-order generators, the listed functions are
holomorphic so the chain rule carries a single derivative factor, and
conjugation swaps the two derivative slots.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .numerics import WirtingerJet2

__all__ = ["ExpressionError", "parse_expression", "expression_jet_fn"]


class ExpressionError(ValueError):
    """The expression does not belong to the supported grammar."""


# ---------------------------------------------------------------------------
# syntax tree


@dataclass(frozen=True)
class _Const:
    value: complex


@dataclass(frozen=True)
class _Z:
    pass


@dataclass(frozen=True)
class _Add:
    a: object
    b: object


@dataclass(frozen=True)
class _Sub:
    a: object
    b: object


@dataclass(frozen=True)
class _Mul:
    a: object
    b: object


@dataclass(frozen=True)
class _Div:
    a: object
    b: object


@dataclass(frozen=True)
class _Neg:
    a: object


@dataclass(frozen=True)
class _Fun:
    name: str
    a: object


_ZERO = _Const(0j)
_ONE = _Const(1 + 0j)
_FUNCS = ("conj", "exp", "sinh", "cosh", "tanh")


# ---------------------------------------------------------------------------
# tokenizer / recursive descent parser

_TOKEN = re.compile(r"\s*(?:(\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
                    r"|([A-Za-z_]\w*)|(.))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ExpressionError(f"cannot tokenize near {text[pos:pos + 8]!r}")
        num, word, sym = m.groups()
        if num is not None:
            tokens.append(("num", num))
        elif word is not None:
            tokens.append(("word", word))
        elif sym.strip():
            if sym not in "+-*/()":
                raise ExpressionError(f"unexpected character {sym!r}")
            tokens.append(("sym", sym))
        pos = m.end()
    tokens.append(("end", ""))
    return tokens


class _Parser:
    def __init__(self, tokens: list[tuple[str, str]]):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_sym(self, sym: str):
        kind, text = self.take()
        if kind != "sym" or text != sym:
            raise ExpressionError(f"expected {sym!r}, found {text or 'end of input'!r}")

    def parse(self):
        node = self.expr()
        kind, text = self.peek()
        if kind != "end":
            raise ExpressionError(f"unexpected trailing input at {text!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek() == ("sym", "+") or self.peek() == ("sym", "-"):
            _, op = self.take()
            rhs = self.term()
            node = _Add(node, rhs) if op == "+" else _Sub(node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.peek() == ("sym", "*") or self.peek() == ("sym", "/"):
            _, op = self.take()
            rhs = self.factor()
            node = _Mul(node, rhs) if op == "*" else _Div(node, rhs)
        return node

    def factor(self):
        if self.peek() == ("sym", "-"):
            self.take()
            return _neg(self.factor())
        if self.peek() == ("sym", "+"):
            self.take()
            return self.factor()
        return self.atom()

    def atom(self):
        kind, text = self.take()
        if kind == "num":
            return _Const(complex(float(text)))
        if kind == "word":
            if text == "z":
                return _Z()
            if text == "i":
                return _Const(1j)
            if text in _FUNCS:
                self.expect_sym("(")
                inner = self.expr()
                self.expect_sym(")")
                return _Fun(text, inner)
            raise ExpressionError(f"unknown name {text!r}; allowed: z, i, "
                                  + ", ".join(_FUNCS))
        if (kind, text) == ("sym", "("):
            inner = self.expr()
            self.expect_sym(")")
            return inner
        raise ExpressionError(f"unexpected token {text or 'end of input'!r}")


def parse_expression(text: str):
    """Parse the grammar into a syntax tree; raises ExpressionError."""
    if not text or not text.strip():
        raise ExpressionError("empty expression")
    return _Parser(_tokenize(text)).parse()


# ---------------------------------------------------------------------------
# simplifying constructors (keep differentiated trees small)


def _is_const(node, value=None) -> bool:
    return isinstance(node, _Const) and (value is None or node.value == value)


def _add(a, b):
    if _is_const(a) and _is_const(b):
        return _Const(a.value + b.value)
    if _is_const(a, 0j):
        return b
    if _is_const(b, 0j):
        return a
    return _Add(a, b)


def _sub(a, b):
    if _is_const(a) and _is_const(b):
        return _Const(a.value - b.value)
    if _is_const(b, 0j):
        return a
    if _is_const(a, 0j):
        return _neg(b)
    return _Sub(a, b)


def _neg(a):
    if _is_const(a):
        return _Const(-a.value)
    if isinstance(a, _Neg):
        return a.a
    return _Neg(a)


def _mul(a, b):
    if _is_const(a) and _is_const(b):
        return _Const(a.value * b.value)
    if _is_const(a, 0j) or _is_const(b, 0j):
        return _ZERO
    if _is_const(a, 1 + 0j):
        return b
    if _is_const(b, 1 + 0j):
        return a
    return _Mul(a, b)


def _div(a, b):
    if _is_const(b, 0j):
        raise ExpressionError("division by the constant zero")
    if _is_const(a, 0j):
        return _ZERO
    if _is_const(a) and _is_const(b):
        return _Const(a.value / b.value)
    if _is_const(b, 1 + 0j):
        return a
    return _Div(a, b)


# ---------------------------------------------------------------------------
# evaluation and symbolic Wirtinger derivatives


def _evaluate(node, z: np.ndarray):
    if isinstance(node, _Const):
        return np.full(np.shape(z), node.value, dtype=complex) if np.ndim(z) else node.value
    if isinstance(node, _Z):
        return z
    if isinstance(node, _Add):
        return _evaluate(node.a, z) + _evaluate(node.b, z)
    if isinstance(node, _Sub):
        return _evaluate(node.a, z) - _evaluate(node.b, z)
    if isinstance(node, _Mul):
        return _evaluate(node.a, z) * _evaluate(node.b, z)
    if isinstance(node, _Div):
        return _evaluate(node.a, z) / _evaluate(node.b, z)
    if isinstance(node, _Neg):
        return -_evaluate(node.a, z)
    if isinstance(node, _Fun):
        inner = _evaluate(node.a, z)
        if node.name == "conj":
            return np.conj(inner)
        return getattr(np, node.name)(inner)
    raise TypeError(f"unknown node {node!r}")


def _diff(node, wrt: str):
    """d node / d wrt with wrt in {'z', 'zbar'}; z and conj(z) are independent."""
    if isinstance(node, _Const):
        return _ZERO
    if isinstance(node, _Z):
        return _ONE if wrt == "z" else _ZERO
    if isinstance(node, _Add):
        return _add(_diff(node.a, wrt), _diff(node.b, wrt))
    if isinstance(node, _Sub):
        return _sub(_diff(node.a, wrt), _diff(node.b, wrt))
    if isinstance(node, _Neg):
        return _neg(_diff(node.a, wrt))
    if isinstance(node, _Mul):
        return _add(_mul(_diff(node.a, wrt), node.b), _mul(node.a, _diff(node.b, wrt)))
    if isinstance(node, _Div):
        num = _sub(_mul(_diff(node.a, wrt), node.b), _mul(node.a, _diff(node.b, wrt)))
        return _div(num, _mul(node.b, node.b))
    if isinstance(node, _Fun):
        if node.name == "conj":
            other = "zbar" if wrt == "z" else "z"
            return _fun_conj(_diff(node.a, other))
        inner = _diff(node.a, wrt)
        if _is_const(inner, 0j):
            return _ZERO
        if node.name == "exp":
            outer = _Fun("exp", node.a)
        elif node.name == "sinh":
            outer = _Fun("cosh", node.a)
        elif node.name == "cosh":
            outer = _Fun("sinh", node.a)
        else:  # tanh
            outer = _sub(_ONE, _mul(_Fun("tanh", node.a), _Fun("tanh", node.a)))
        return _mul(outer, inner)
    raise TypeError(f"unknown node {node!r}")


def _fun_conj(node):
    if _is_const(node):
        return _Const(node.value.conjugate())
    return _Fun("conj", node)


def expression_jet_fn(text: str):
    """Compile an expression into a vectorized order-two jet evaluator."""
    tree = parse_expression(text)
    d_z = _diff(tree, "z")
    d_zb = _diff(tree, "zbar")
    d_zz = _diff(d_z, "z")
    d_zzb = _diff(d_z, "zbar")
    d_zbzb = _diff(d_zb, "zbar")

    def jet_fn(z: np.ndarray) -> WirtingerJet2:
        z = np.asarray(z, dtype=complex)
        return WirtingerJet2(
            val=_evaluate(tree, z),
            dz=_evaluate(d_z, z),
            dzbar=_evaluate(d_zb, z),
            dzz=_evaluate(d_zz, z),
            dzzbar=_evaluate(d_zzb, z),
            dzbarzbar=_evaluate(d_zbzb, z),
        )

    return jet_fn
