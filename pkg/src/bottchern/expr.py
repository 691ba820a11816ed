"""Expressions in a base coordinate ``s`` describing metric families.

Grammar::

    expr   := term (("+" | "-") term)*
    term   := factor (("*" | "/") factor)*
    factor := NUMBER | "s" | "sbar" | "(" expr ")" | ("log" | "exp") "(" expr ")"
            | "-" factor
    NUMBER := decimal | p/q

The unary minus is an extension for convenience.  Expressions evaluate
elementwise on numpy arrays of complex ``s``.
"""

import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ExprParseError, ShapeError

_TOKEN = re.compile(r"\s*(?:(?P<rat>\d+/\d+(?![\d.]))|(?P<num>\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
                    r"|(?P<name>[A-Za-z_]+)|(?P<op>[-+*/()]))")


@dataclass(frozen=True)
class Node:
    kind: str
    args: tuple = ()
    value: object = None


def tokenize(text):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            col = pos + 1 + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ExprParseError(f"unexpected character {text[col - 1]!r}", col)
        start = m.start(m.lastgroup) + 1
        out.append((m.lastgroup, m.group(m.lastgroup), start))
        pos = m.end()
    out.append(("end", "", len(text) + 1))
    return out


class _Parser:
    def __init__(self, text):
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, val, col = self.take()
        if val != value:
            raise ExprParseError(f"expected {value!r}, found {val or 'end of input'!r}", col)

    def parse(self):
        node = self.expr()
        kind, val, col = self.peek()
        if kind != "end":
            raise ExprParseError(f"unexpected token {val!r}", col)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = Node("add" if op == "+" else "sub", (node, self.term()))
        return node

    def term(self):
        node = self.factor()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            node = Node("mul" if op == "*" else "div", (node, self.factor()))
        return node

    def factor(self):
        kind, val, col = self.take()
        if kind == "rat":
            p, q = val.split("/")
            if int(q) == 0:
                raise ExprParseError("zero denominator", col)
            return Node("const", value=Fraction(int(p), int(q)))
        if kind == "num":
            return Node("const", value=float(val))
        if kind == "name":
            if val in ("s", "sbar"):
                return Node(val)
            if val in ("log", "exp"):
                self.expect("(")
                inner = self.expr()
                self.expect(")")
                return Node(val, (inner,))
            raise ExprParseError(f"unknown identifier {val!r}", col)
        if val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if val == "-":
            return Node("neg", (self.factor(),))
        raise ExprParseError(f"unexpected {val or 'end of input'!r}", col)


def parse(text):
    """Parse an expression string into a :class:`Node` tree.

    >>> parse("1/2 * s").args[0].value
    Fraction(1, 2)
    """
    return _Parser(str(text)).parse()


def evaluate(node, s):
    s = np.asarray(s, dtype=complex)
    k = node.kind
    if k == "const":
        return np.full(s.shape, complex(node.value), dtype=complex)
    if k == "s":
        return s.copy()
    if k == "sbar":
        return np.conj(s)
    if k == "neg":
        return -evaluate(node.args[0], s)
    if k in ("log", "exp"):
        return (np.log if k == "log" else np.exp)(evaluate(node.args[0], s))
    a, b = (evaluate(x, s) for x in node.args)
    return {"add": np.add, "sub": np.subtract, "mul": np.multiply, "div": np.divide}[k](a, b)


class Expr:
    """A parsed expression that can be called on arrays of ``s``."""

    def __init__(self, text):
        self.text = str(text)
        self.tree = parse(self.text)

    def __call__(self, s):
        return evaluate(self.tree, s)

    def __repr__(self):
        return f"Expr({self.text!r})"


class MetricFamilyExpr:
    """A ``dim x dim`` Gram matrix whose entries are expressions in ``s``.

    Each entry is either a string (real part; imaginary part zero) or a pair
    ``[re, im]`` of strings; the entry value is ``re(s) + 1j * im(s)``.
    """

    def __init__(self, entries):
        rows = [list(r) for r in entries]
        self.dim = len(rows)
        if any(len(r) != self.dim for r in rows):
            raise ShapeError("metric family must be square")
        self.entries = []
        for r in rows:
            parsed = []
            for e in r:
                if isinstance(e, (list, tuple)):
                    if len(e) != 2:
                        raise ShapeError("complex entries are [re, im] pairs")
                    parsed.append((Expr(e[0]), Expr(e[1])))
                else:
                    parsed.append((Expr(e), None))
            self.entries.append(parsed)

    @classmethod
    def scalar(cls, text):
        return cls([[text]])

    def __call__(self, s):
        """Gram matrices of shape ``s.shape + (dim, dim)``."""
        s = np.asarray(s, dtype=complex)
        out = np.empty(s.shape + (self.dim, self.dim), dtype=complex)
        for i, row in enumerate(self.entries):
            for j, (re_, im_) in enumerate(row):
                val = re_(s)
                if im_ is not None:
                    val = val + 1j * im_(s)
                out[..., i, j] = val
        return out

    def check_hermitian_pd(self, s, tol=1e-9):
        """True iff the family is hermitian positive-definite at every point of ``s``."""
        G = self(s)
        if self.dim == 0:
            return True
        scale = np.maximum(1.0, np.max(np.abs(G), axis=(-1, -2)))
        if np.any(np.max(np.abs(G - np.conj(np.swapaxes(G, -1, -2))), axis=(-1, -2)) > tol * scale):
            return False
        H = (G + np.conj(np.swapaxes(G, -1, -2))) / 2
        return bool(np.all(np.linalg.eigvalsh(H)[..., 0] > 0))
