"""Text syntax for expression trees.

Grammar (whitespace-insensitive)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/' | <juxtaposition>) unary)*
    unary   := ('-' | '+') unary | power
    power   := atom ('^' INT)?
    atom    := NUMBER | 'x' | 'y' | 'i' | 'sqrt(' INT ')' | call | '(' expr ')'
    call    := e(lin) | sinpi(lin) | cospi(lin) | abs(expr) | conj(expr)
             | chi(scalar, scalar) | floorphase(scalar, scalar, scalar)
             | shift(scalar, scalar, expr) | wrap(expr)

``lin`` is an affine form ``q*x + r*y + s`` (``q``, ``r`` rational).  Constant
subexpressions are folded exactly, so ``to_dsl`` followed by ``parse_expr``
reproduces the same text.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from . import expr as E
from .scalar import ExactScalar, FieldMismatchError, format_scalar, is_squarefree


class DslError(ValueError):
    def __init__(self, message: str, column: int, line: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:\.\d+)?)|(?P<id>[A-Za-z_]\w*)|(?P<op>[-+*/^(),]))")

_FUNCS = {"e", "sinpi", "cospi", "abs", "conj", "chi", "floorphase", "shift", "wrap", "sqrt"}


@dataclass
class _Tok:
    kind: str  # num | id | op | eof
    text: str
    col: int


def _tokenize(src: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(src):
        if src[pos:].strip() == "":
            break
        m = _TOKEN.match(src, pos)
        if m is None:
            col = pos + len(src[pos:]) - len(src[pos:].lstrip()) + 1
            raise DslError(f"unexpected character {src[col - 1]!r}", col)
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", len(src) + 1))
    return toks


# exact complex constants as (re, im) pairs


def _cmul(a: E.Const, b: E.Const) -> E.Const:
    return E.Const(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re)


def _cdiv(a: E.Const, b: E.Const) -> E.Const:
    n = b.re * b.re + b.im * b.im
    if not n:
        raise ZeroDivisionError
    return _cmul(a, E.Const(b.re / n, -b.im / n))


class _Parser:
    def __init__(self, src: str, d: int | None):
        self.src = src
        self.toks = _tokenize(src)
        self.i = 0
        self.d = d

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> _Tok:
        t = self.tok
        if t.text != text:
            what = "end of input" if t.kind == "eof" else repr(t.text)
            raise DslError(f"expected {text!r}, found {what}", t.col)
        return self.advance()

    def operand(self, op: _Tok | None, parse):
        # a missing operand after an operator is reported at the operator
        if self.tok.kind == "eof" and op is not None:
            raise DslError(f"missing operand after {op.text!r}", op.col)
        return parse()

    def parse(self) -> E.Expr:
        node = self.expr()
        if self.tok.kind != "eof":
            raise DslError(f"unexpected {self.tok.text!r}", self.tok.col)
        return node

    def expr(self) -> E.Expr:
        node = self.term()
        while self.tok.text in ("+", "-"):
            op = self.advance()
            rhs = self.operand(op, self.term)
            if op.text == "-":
                rhs = _neg(rhs)
            node = _add(node, rhs)
        return node

    def term(self) -> E.Expr:
        node = self.unary()
        while True:
            t = self.tok
            if t.text in ("*", "/"):
                op = self.advance()
                rhs = self.operand(op, self.unary)
                if op.text == "*":
                    node = _mul(node, rhs)
                else:
                    if not isinstance(rhs, E.Const):
                        raise DslError("division by a non-constant", op.col)
                    try:
                        node = _mul(node, _cdiv(E.ONE, rhs))
                    except ZeroDivisionError:
                        raise DslError("division by zero", op.col) from None
            elif t.kind in ("num", "id") or t.text == "(":
                node = _mul(node, self.unary())
            else:
                return node

    def unary(self) -> E.Expr:
        t = self.tok
        if t.text in ("-", "+"):
            op = self.advance()
            node = self.operand(op, self.unary)
            return _neg(node) if op.text == "-" else node
        return self.power()

    def power(self) -> E.Expr:
        base = self.atom()
        if self.tok.text == "^":
            op = self.advance()
            t = self.tok
            if t.kind != "num" or not t.text.isdigit():
                raise DslError("exponent must be a non-negative integer", t.col if t.kind != "eof" else op.col)
            self.advance()
            n = int(t.text)
            if isinstance(base, E.Const):
                out = E.ONE
                for _ in range(n):
                    out = _cmul(out, base)
                return out
            return E.power(base, n)
        return base

    def atom(self) -> E.Expr:
        t = self.tok
        if t.kind == "eof":
            raise DslError("unexpected end of input", t.col)
        if t.kind == "num":
            self.advance()
            return E.Const(Fraction(t.text))
        if t.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        if t.kind == "id":
            self.advance()
            if t.text in ("x", "y"):
                return E.Var(t.text)
            if t.text == "i":
                return E.Const(0, 1)
            if t.text in _FUNCS:
                return self.call(t)
            raise DslError(f"unknown identifier {t.text!r}", t.col)
        raise DslError(f"unexpected {t.text!r}", t.col)

    def args(self, n: int, name: _Tok) -> list[tuple[E.Expr, int]]:
        self.expect("(")
        out = []
        for k in range(n):
            if k:
                self.expect(",")
            col = self.tok.col
            out.append((self.expr(), col))
        self.expect(")")
        return out

    def call(self, name: _Tok) -> E.Expr:
        fn = name.text
        if fn == "sqrt":
            self.expect("(")
            t = self.tok
            if t.kind != "num" or not t.text.isdigit():
                raise DslError("sqrt takes an integer", t.col)
            self.advance()
            self.expect(")")
            d = int(t.text)
            if d != 1 and not is_squarefree(d):
                raise DslError(f"d={d} is not squarefree", t.col)
            if self.d is not None and d not in (1, self.d):
                raise DslError(f"sqrt({d}) in a session with d={self.d}", t.col)
            return E.Const(ExactScalar.sqrt(d) if d != 1 else 1)
        if fn in ("e", "sinpi", "cospi"):
            [(arg, col)] = self.args(1, name)
            q, r, s = _linear(arg, col)
            cls = {"e": E.Exp, "sinpi": E.SinPi, "cospi": E.CosPi}[fn]
            return cls(q, r, s)
        if fn in ("abs", "conj", "wrap"):
            [(arg, _)] = self.args(1, name)
            return {"abs": E.Abs, "conj": E.Conj, "wrap": E.Wrap}[fn](arg)
        if fn == "chi":
            (a, ca), (b, cb) = self.args(2, name)
            return E.Chi(_scalar(a, ca), _scalar(b, cb))
        if fn == "floorphase":
            parts = self.args(3, name)
            return E.FloorPhase(*(_scalar(p, c) for p, c in parts))
        if fn == "shift":
            (u, cu), (v, cv), (child, _) = self.args(3, name)
            return E.Translate(_scalar(u, cu), _scalar(v, cv), child)
        raise AssertionError(fn)


def _neg(node: E.Expr) -> E.Expr:
    if isinstance(node, E.Const):
        return E.Const(-node.re, -node.im)
    return _mul(E.Const(-1), node)


def _add(a: E.Expr, b: E.Expr) -> E.Expr:
    if isinstance(a, E.Const) and isinstance(b, E.Const):
        return E.Const(a.re + b.re, a.im + b.im)
    return E.add(a, b)


def _mul(a: E.Expr, b: E.Expr) -> E.Expr:
    if isinstance(a, E.Const) and isinstance(b, E.Const):
        return _cmul(a, b)
    return E.prod(a, b)


def _scalar(node: E.Expr, col: int) -> ExactScalar:
    if not isinstance(node, E.Const) or node.im != 0:
        raise DslError("expected a real constant", col)
    return node.re


def _linear(node: E.Expr, col: int) -> tuple[Fraction, Fraction, ExactScalar]:
    """Coefficients (q, r, s) of an affine form q*x + r*y + s."""
    if isinstance(node, E.Const):
        return Fraction(0), Fraction(0), _scalar(node, col)
    if isinstance(node, E.Var):
        return (Fraction(1), Fraction(0), ExactScalar(0)) if node.name == "x" else (
            Fraction(0), Fraction(1), ExactScalar(0))
    if isinstance(node, E.Sum):
        q, r, s = Fraction(0), Fraction(0), ExactScalar(0)
        for t in node.terms:
            tq, tr, ts = _linear(t, col)
            q, r, s = q + tq, r + tr, s + ts
        return q, r, s
    if isinstance(node, E.Prod):
        consts = [f for f in node.factors if isinstance(f, E.Const)]
        rest = [f for f in node.factors if not isinstance(f, E.Const)]
        if len(rest) == 1:
            k = E.ONE
            for c in consts:
                k = _cmul(k, c)
            kr = _scalar(k, col)
            q, r, s = _linear(rest[0], col)
            if (q or r) and not kr.is_rational:
                raise DslError("coefficients of x and y must be rational", col)
            return q * kr.a, r * kr.a, s * kr
    raise DslError("argument must be affine in x and y", col)


def parse_expr(text: str, d: int | None = None) -> E.Expr:
    try:
        return _Parser(text, d).parse()
    except FieldMismatchError as exc:
        raise DslError(str(exc), 1) from None


def _sc(s: ExactScalar) -> str:
    return f"({format_scalar(s)})"


def _lin_text(n: E._Linear) -> str:
    return f"{_sc(ExactScalar(n.q))}*x+{_sc(ExactScalar(n.r))}*y+{_sc(n.s)}"


def to_dsl(e: E.Expr) -> str:
    """Text form of any expression tree; ``parse_expr`` inverts it."""
    if isinstance(e, E.Const):
        if e.im == 0:
            return _sc(e.re)
        return f"({format_scalar(e.re)}+{_sc(e.im)}*i)"
    if isinstance(e, E.Var):
        return e.name
    if isinstance(e, E.Exp):
        return f"e({_lin_text(e)})"
    if isinstance(e, E.SinPi):
        return f"sinpi({_lin_text(e)})"
    if isinstance(e, E.CosPi):
        return f"cospi({_lin_text(e)})"
    if isinstance(e, E.Abs):
        return f"abs({to_dsl(e.child)})"
    if isinstance(e, E.Conj):
        return f"conj({to_dsl(e.child)})"
    if isinstance(e, E.Wrap):
        return f"wrap({to_dsl(e.child)})"
    if isinstance(e, E.Chi):
        return f"chi({_sc(e.a)},{_sc(e.b)})"
    if isinstance(e, E.FloorPhase):
        return f"floorphase({_sc(e.alpha)},{_sc(e.beta)},{_sc(e.t)})"
    if isinstance(e, E.Translate):
        return f"shift({_sc(e.u)},{_sc(e.v)},{to_dsl(e.child)})"
    if isinstance(e, E.Sum):
        return "(" + "+".join(to_dsl(t) for t in e.terms) + ")"
    if isinstance(e, E.Prod):
        return "(" + "*".join(to_dsl(f) for f in e.factors) + ")"
    raise TypeError(f"cannot print {type(e).__name__}")
