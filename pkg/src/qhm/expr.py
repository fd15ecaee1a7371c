"""Expression trees for complex-valued functions of (x, y).

Nodes are immutable.  ``evaluate`` works in two modes:

* float mode, when ``x``/``y`` are floats or numpy arrays (vectorized);
* exact mode, when ``x``/``y`` are rationals or :class:`ExactScalar`; floors,
  interval tests and phase reductions are then decided exactly and only the
  final transcendental values are rounded;
* mixed mode, with ``x`` exact and ``y`` a float array.  Every discontinuity
  of a tree lives in ``x``, so this keeps floors and indicators exact while
  vectorizing over ``y``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .scalar import ExactScalar

TWO_PI_I = 2j * np.pi


def _exact(v) -> bool:
    return isinstance(v, ExactScalar)


def _frac_part(t: ExactScalar) -> ExactScalar:
    return t - t.floor()


def _phase(t):
    """exp(2 pi i t)."""
    if _exact(t):
        return cmath.exp(TWO_PI_I * float(_frac_part(t)))
    return np.exp(TWO_PI_I * t)


_SPLIT = float(2**26)


def int_phase(n, y, s: ExactScalar | None = None):
    """e(n (y - s)) for integer-valued n, float y and exact s.

    Both products are reduced mod 1 before rounding: y is split into a 26-bit
    head, whose multiples by n are exact, and a tiny tail; n s is reduced in
    exact arithmetic.  The error is then O(eps) instead of O(|n y| eps).
    """
    n, y = np.broadcast_arrays(np.asarray(n, dtype=float), np.asarray(y, dtype=float))
    hi = np.round(y * _SPLIT) / _SPLIT
    nh = n * hi
    t = (nh - np.round(nh)) + n * (y - hi)
    if s is not None and s:
        uniq, inv = np.unique(n, return_inverse=True)
        table = np.array([float(_frac_part(int(v) * s)) for v in uniq])
        t = t - table[inv].reshape(t.shape)
    return np.exp(TWO_PI_I * t)


def _shift(v, s: ExactScalar, fs: float):
    if _exact(v):
        return v + s
    if fs == 0.0:
        return v
    return v + fs


class Expr:
    """Base node.  Subclasses implement ``_ev(x, y)``."""

    def _ev(self, x, y):  # pragma: no cover - abstract
        raise NotImplementedError

    def children(self) -> tuple[Expr, ...]:
        return ()

    def __add__(self, other):
        return add(self, other)

    def __mul__(self, other):
        return prod(self, other)

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children())


@dataclass(frozen=True, eq=False)
class Const(Expr):
    re: ExactScalar = field(default_factory=lambda: ExactScalar(0))
    im: ExactScalar = field(default_factory=lambda: ExactScalar(0))

    def __post_init__(self):
        object.__setattr__(self, "re", ExactScalar.coerce(self.re))
        object.__setattr__(self, "im", ExactScalar.coerce(self.im))
        object.__setattr__(self, "_val", complex(float(self.re), float(self.im)))

    def _ev(self, x, y):
        return self._val

    @property
    def value(self) -> complex:
        return self._val


@dataclass(frozen=True, eq=False)
class Var(Expr):
    name: str

    def __post_init__(self):
        if self.name not in ("x", "y"):
            raise ValueError(f"unknown variable {self.name!r}")

    def _ev(self, x, y):
        v = x if self.name == "x" else y
        return complex(float(v)) if _exact(v) else v + 0j


@dataclass(frozen=True, eq=False)
class _Linear(Expr):
    """Base for nodes of the form g(q*x + r*y + s)."""

    q: Fraction = Fraction(0)
    r: Fraction = Fraction(0)
    s: ExactScalar = field(default_factory=lambda: ExactScalar(0))

    def __post_init__(self):
        object.__setattr__(self, "q", Fraction(self.q))
        object.__setattr__(self, "r", Fraction(self.r))
        object.__setattr__(self, "s", ExactScalar.coerce(self.s))
        object.__setattr__(self, "_fq", float(self.q))
        object.__setattr__(self, "_fr", float(self.r))
        object.__setattr__(self, "_fs", float(self.s))

    def arg(self, x, y):
        if _exact(x):
            if _exact(y):
                return self.q * x + self.r * y + self.s
            # every g here has period 2, so reduce the exact part first
            t = self.q * x + self.s
            t = float(t - 2 * (t / 2).floor())
            return t + self._fr * y if self._fr else t
        t = self._fs
        if self._fq:
            t = t + self._fq * x
        if self._fr:
            t = t + self._fr * y
        return t


class Exp(_Linear):
    """e(qx + ry + s) = exp(2 pi i (qx + ry + s))."""

    def _ev(self, x, y):
        t = self.arg(x, y)
        return _phase(t)


class SinPi(_Linear):
    """sin(pi (qx + ry + s))."""

    def _ev(self, x, y):
        t = self.arg(x, y)
        if _exact(t):
            t = t - 2 * (t / 2).floor()
            return complex(math.sin(math.pi * float(t)))
        return np.sin(np.pi * t) + 0j


class CosPi(_Linear):
    """cos(pi (qx + ry + s))."""

    def _ev(self, x, y):
        t = self.arg(x, y)
        if _exact(t):
            t = t - 2 * (t / 2).floor()
            return complex(math.cos(math.pi * float(t)))
        return np.cos(np.pi * t) + 0j


@dataclass(frozen=True, eq=False)
class Abs(Expr):
    child: Expr

    def children(self):
        return (self.child,)

    def _ev(self, x, y):
        v = self.child._ev(x, y)
        return abs(v) + 0j


@dataclass(frozen=True, eq=False)
class Conj(Expr):
    child: Expr

    def children(self):
        return (self.child,)

    def _ev(self, x, y):
        v = self.child._ev(x, y)
        return v.conjugate()


@dataclass(frozen=True, eq=False)
class Chi(Expr):
    """Indicator of a <= x < b."""

    a: ExactScalar
    b: ExactScalar

    def __post_init__(self):
        object.__setattr__(self, "a", ExactScalar.coerce(self.a))
        object.__setattr__(self, "b", ExactScalar.coerce(self.b))
        object.__setattr__(self, "_fa", float(self.a))
        object.__setattr__(self, "_fb", float(self.b))

    def _ev(self, x, y):
        if _exact(x):
            return 1.0 + 0j if (self.a <= x and x < self.b) else 0j
        # float mode: a sample landing exactly on float(a) is not re-checked exactly
        return ((x >= self._fa) & (x < self._fb)) + 0j


@dataclass(frozen=True, eq=False)
class FloorPhase(Expr):
    """exp(2 pi i * alpha * floor(x + t) * (y + beta))."""

    alpha: ExactScalar
    beta: ExactScalar
    t: ExactScalar

    def __post_init__(self):
        for name in ("alpha", "beta", "t"):
            object.__setattr__(self, name, ExactScalar.coerce(getattr(self, name)))
        object.__setattr__(self, "_falpha", float(self.alpha))
        object.__setattr__(self, "_fbeta", float(self.beta))
        object.__setattr__(self, "_ft", float(self.t))

    def _ev(self, x, y):
        if _exact(x):
            k = (x + self.t).floor()
            if _exact(y):
                return _phase(self.alpha * k * (y + self.beta))
            ak = self.alpha * k
            return _phase(float(_frac_part(ak * self.beta)) + float(ak) * y)
        k = np.floor(x + self._ft) if self._ft else np.floor(x)
        if self.alpha.is_rational and self.alpha.a.denominator == 1:
            return int_phase(int(self.alpha.a) * k, y, -self.beta)
        return np.exp(TWO_PI_I * self._falpha * k * (y + self._fbeta))


@dataclass(frozen=True, eq=False)
class Sum(Expr):
    terms: tuple[Expr, ...]

    def children(self):
        return self.terms

    def _ev(self, x, y):
        it = iter(self.terms)
        acc = next(it)._ev(x, y)
        for t in it:
            acc = acc + t._ev(x, y)
        return acc


@dataclass(frozen=True, eq=False)
class Prod(Expr):
    factors: tuple[Expr, ...]

    def children(self):
        return self.factors

    def _ev(self, x, y):
        it = iter(self.factors)
        acc = next(it)._ev(x, y)
        for f in it:
            acc = acc * f._ev(x, y)
        return acc


@dataclass(frozen=True, eq=False)
class Translate(Expr):
    """child evaluated at (x + u, y + v)."""

    u: ExactScalar
    v: ExactScalar
    child: Expr

    def __post_init__(self):
        object.__setattr__(self, "u", ExactScalar.coerce(self.u))
        object.__setattr__(self, "v", ExactScalar.coerce(self.v))
        object.__setattr__(self, "_fu", float(self.u))
        object.__setattr__(self, "_fv", float(self.v))

    def children(self):
        return (self.child,)

    def _ev(self, x, y):
        return self.child._ev(_shift(x, self.u, self._fu), _shift(y, self.v, self._fv))


@dataclass(frozen=True, eq=False)
class Wrap(Expr):
    """child evaluated at (x mod 1, y mod 1)."""

    child: Expr

    def children(self):
        return (self.child,)

    def _ev(self, x, y):
        xw = _frac_part(x) if _exact(x) else x - np.floor(x)
        yw = _frac_part(y) if _exact(y) else y - np.floor(y)
        return self.child._ev(xw, yw)


ZERO = Const(0)
ONE = Const(1)


def const(value) -> Const:
    if isinstance(value, Const):
        return value
    if isinstance(value, complex):
        raise TypeError("complex floats are not exact; use Const(re, im)")
    return Const(ExactScalar.coerce(value))


def _is_const(e: Expr, value) -> bool:
    return isinstance(e, Const) and e.re == value and e.im == 0


def add(*terms) -> Expr:
    flat: list[Expr] = []
    re = im = ExactScalar(0)
    for t in terms:
        t = t if isinstance(t, Expr) else const(t)
        for u in t.terms if isinstance(t, Sum) else (t,):
            if isinstance(u, Const):
                re, im = re + u.re, im + u.im
            else:
                flat.append(u)
    if re or im:
        flat.insert(0, Const(re, im))
    if not flat:
        return ZERO
    if len(flat) == 1:
        return flat[0]
    return Sum(tuple(flat))


def prod(*factors) -> Expr:
    flat: list[Expr] = []
    re, im = ExactScalar(1), ExactScalar(0)
    for f in factors:
        f = f if isinstance(f, Expr) else const(f)
        for g in f.factors if isinstance(f, Prod) else (f,):
            if isinstance(g, Const):
                re, im = re * g.re - im * g.im, re * g.im + im * g.re
            else:
                flat.append(g)
    if not re and not im:
        return ZERO
    if re != 1 or im:
        flat.insert(0, Const(re, im))
    if not flat:
        return ONE
    if len(flat) == 1:
        return flat[0]
    return Prod(tuple(flat))


def conj(e: Expr) -> Expr:
    if isinstance(e, Conj):
        return e.child
    if isinstance(e, Const):
        return Const(e.re, -e.im)
    return Conj(e)


def translate(e: Expr, u, v) -> Expr:
    u = ExactScalar.coerce(u)
    v = ExactScalar.coerce(v)
    if not u and not v:
        return e
    if isinstance(e, Const):
        return e
    if isinstance(e, Translate):
        return translate(e.child, e.u + u, e.v + v)
    return Translate(u, v, e)


def power(e: Expr, n: int) -> Expr:
    if n < 0:
        raise ValueError("negative powers are not supported")
    return prod(*([e] * n))


def evaluate(e: Expr, x, y):
    """Evaluate ``e`` at ``(x, y)``; see the module docstring for modes."""
    if isinstance(x, (int, Fraction, ExactScalar)) and isinstance(
        y, (int, Fraction, ExactScalar)
    ):
        return complex(e._ev(ExactScalar.coerce(x), ExactScalar.coerce(y)))
    ya = np.asarray(y, dtype=float)
    if isinstance(x, (int, Fraction, ExactScalar)):
        xa = np.asarray(0.0)
        out = np.asarray(e._ev(ExactScalar.coerce(x), ya), dtype=complex)
    else:
        xa = np.asarray(x, dtype=float)
        out = np.asarray(e._ev(xa, ya), dtype=complex)
    shape = np.broadcast_shapes(xa.shape, ya.shape)
    if out.shape != shape:
        out = np.broadcast_to(out, shape).copy()
    if out.ndim == 0:
        return complex(out)
    return out


def walk(e: Expr) -> Iterable[Expr]:
    yield e
    for c in e.children():
        yield from walk(c)


def _mod1(s: ExactScalar) -> ExactScalar:
    return s.floor_mod1()[1]


def _trig_zeros(node: _Linear, off: ExactScalar, shift: Fraction) -> set[ExactScalar]:
    # zeros in x of sin(pi(q(x+off) + s)) (shift=0) or cos (shift=1/2); needs r == 0
    q = node.q
    if q == 0 or node.r != 0:
        return set()
    base = node.s + q * off - shift
    ends = (float(base), float(base + q))
    lo, hi = math.floor(min(ends)) - 1, math.ceil(max(ends)) + 1
    return {_mod1((n - base) / q) for n in range(lo, hi + 1)}


def x_breakpoints(
    e: Expr, off: ExactScalar | None = None, chi: bool = True, kinks: bool = True
) -> set[ExactScalar]:
    """Points in [0, 1) where ``e`` may fail to be smooth in x.

    A superset of the jump (and, with ``kinks``, derivative-jump) locations of
    the tree evaluated for x in [0, 1); used to split quadrature panels.  With
    ``chi=False`` only floor and wrap jumps are reported.
    """
    off = ExactScalar(0) if off is None else off
    if isinstance(e, Chi):
        return {_mod1(e.a - off), _mod1(e.b - off)} if chi else set()
    if isinstance(e, FloorPhase):
        return {_mod1(-e.t - off)}
    if isinstance(e, Translate):
        return x_breakpoints(e.child, off + e.u, chi, kinks)
    if isinstance(e, Wrap):
        inner = x_breakpoints(e.child, None, chi, kinks)
        return {_mod1(-off)} | {_mod1(b - off) for b in inner}
    if isinstance(e, Abs):
        out = x_breakpoints(e.child, off, chi, kinks)
        if not kinks:
            return out
        if isinstance(e.child, SinPi):
            out |= _trig_zeros(e.child, off, Fraction(0))
        elif isinstance(e.child, CosPi):
            out |= _trig_zeros(e.child, off, Fraction(1, 2))
        return out
    out: set[ExactScalar] = set()
    for c in e.children():
        out |= x_breakpoints(c, off, chi, kinks)
    return out
