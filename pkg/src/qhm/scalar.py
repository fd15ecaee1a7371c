"""Exact arithmetic in a real quadratic field Q(sqrt(d)).

Deformation parameters are stored as ``a + b*sqrt(d)`` with rational ``a``,
``b`` and squarefree ``d``.  Every decision (sign, floor, comparison) is made
without floating point; floats only appear as the *output* of ``float()``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from numbers import Rational


class FieldMismatchError(ValueError):
    """Two scalars live in different quadratic fields."""


class ScalarParseError(ValueError):
    pass


def is_squarefree(n: int) -> bool:
    if n < 1:
        return False
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


def sqrt_enclosure(d: int, bits: int) -> tuple[Fraction, Fraction]:
    """Rational ``lo <= sqrt(d) <= hi`` with ``hi - lo <= 2**-bits``."""
    scale = 1 << bits
    n = math.isqrt(d * scale * scale)
    lo = Fraction(n, scale)
    hi = lo if n * n == d * scale * scale else Fraction(n + 1, scale)
    return lo, hi


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, Rational)):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    raise TypeError(f"cannot use {type(v).__name__} as an exact rational")


@total_ordering
class ExactScalar:
    """Immutable element ``a + b*sqrt(d)``.

    A scalar with ``b == 0`` is stored with ``d == 0`` so that rationals mix
    freely with any field; two scalars with nonzero surd parts must agree on
    ``d``.
    """

    __slots__ = ("a", "b", "d", "_float")

    def __init__(self, a=0, b=0, d: int = 0):
        a = _frac(a)
        b = _frac(b)
        d = int(d)
        if d < 0:
            raise ValueError("d must be non-negative")
        if d == 1:
            a, b, d = a + b, Fraction(0), 0
        if d and not is_squarefree(d):
            raise ValueError(f"d={d} is not squarefree")
        if d == 0 and b != 0:
            raise ValueError("d=0 requires b=0")
        if b == 0:
            d = 0
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "_float", None)

    def __setattr__(self, name, value):
        raise AttributeError("ExactScalar is immutable")

    # construction helpers

    @classmethod
    def coerce(cls, v) -> ExactScalar:
        if isinstance(v, ExactScalar):
            return v
        if isinstance(v, float):
            raise TypeError("floats are not exact; pass a Fraction or a string")
        return cls(_frac(v))

    @classmethod
    def sqrt(cls, d: int) -> ExactScalar:
        return cls(0, 1, d)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def _common_d(self, other: ExactScalar) -> int:
        if self.d and other.d and self.d != other.d:
            raise FieldMismatchError(f"sqrt({self.d}) and sqrt({other.d}) mixed")
        return self.d or other.d

    # field arithmetic

    def __add__(self, other):
        try:
            other = ExactScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return ExactScalar(self.a + other.a, self.b + other.b, self._common_d(other))

    __radd__ = __add__

    def __neg__(self):
        return ExactScalar(-self.a, -self.b, self.d)

    def __sub__(self, other):
        try:
            other = ExactScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = ExactScalar.coerce(other)
        except TypeError:
            return NotImplemented
        d = self._common_d(other)
        return ExactScalar(
            self.a * other.a + d * self.b * other.b,
            self.a * other.b + self.b * other.a,
            d,
        )

    __rmul__ = __mul__

    def conjugate_surd(self) -> ExactScalar:
        return ExactScalar(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def inverse(self) -> ExactScalar:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return ExactScalar(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        try:
            other = ExactScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return ExactScalar.coerce(other) * self.inverse()

    # order

    def sign(self) -> int:
        a, b, d = self.a, self.b, self.d
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sb == 0:
            return sa
        if sa == 0:
            return sb
        if sa == sb:
            return sa
        # opposite signs: compare a^2 with d*b^2 (never equal, d squarefree)
        diff = a * a - d * b * b
        return sa if diff > 0 else sb

    def __eq__(self, other):
        try:
            other = ExactScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self.a == other.a and self.b == other.b and self.d == other.d

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __lt__(self, other):
        try:
            other = ExactScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return (self - other).sign() < 0

    def __bool__(self):
        return self.a != 0 or self.b != 0

    # enclosures, floor, approximation

    def enclosure(self, bits: int) -> tuple[Fraction, Fraction]:
        if self.b == 0:
            return self.a, self.a
        lo, hi = sqrt_enclosure(self.d, bits)
        x, y = self.a + self.b * lo, self.a + self.b * hi
        return (x, y) if x <= y else (y, x)

    def floor(self) -> int:
        if self.b == 0:
            return math.floor(self.a)
        bits = 32
        while True:
            lo, hi = self.enclosure(bits)
            k = math.floor(lo)
            if math.floor(hi) == k:
                break
            bits *= 2
        # exact confirmation: k <= s < k + 1
        assert (self - k).sign() >= 0 and (self - (k + 1)).sign() < 0
        return k

    def floor_mod1(self) -> tuple[int, ExactScalar]:
        k = self.floor()
        return k, self - k

    def approx(self, eps) -> Fraction:
        """Rational within ``eps`` of the exact value."""
        eps = _frac(eps)
        if eps <= 0:
            raise ValueError("eps must be positive")
        if self.b == 0:
            return self.a
        bits = 8
        while True:
            lo, hi = self.enclosure(bits)
            if hi - lo < eps:
                return (lo + hi) / 2
            bits *= 2

    def __float__(self):
        if self._float is None:
            if self.b == 0:
                val = float(self.a)
            else:
                lo, hi = self.enclosure(80)
                val = float((lo + hi) / 2)
            object.__setattr__(self, "_float", val)
        return self._float

    # text

    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return f"ExactScalar({format_scalar(self)!r})"


def format_scalar(s: ExactScalar) -> str:
    """Canonical text form, inverse of :func:`parse_scalar`."""
    parts = []
    if s.a != 0 or s.b == 0:
        parts.append(str(s.a))
    if s.b != 0:
        if s.b == 1:
            coef = ""
        elif s.b == -1:
            coef = "-"
        else:
            coef = f"{s.b}*"
        term = f"{coef}sqrt({s.d})"
        if parts and not term.startswith("-"):
            term = "+" + term
        parts.append(term)
    return "".join(parts)


_TERM = re.compile(
    r"""(?P<sign>[+-])?
        (?:
          (?P<num>\d+)(?:/(?P<den>\d+))?(?:\*sqrt\((?P<d1>\d+)\))?
        | sqrt\((?P<d2>\d+)\)
        )""",
    re.VERBOSE,
)


def parse_scalar(text: str, d: int | None = None) -> ExactScalar:
    """Parse ``p/q``, ``p/q + r/s*sqrt(d)`` and similar forms.

    If ``d`` is given, any surd in the text must use that ``d``.
    """
    src = "".join(text.split())
    if not src:
        raise ScalarParseError("empty scalar")
    pos = 0
    total = ExactScalar(0)
    nterms = 0
    while pos < len(src):
        m = _TERM.match(src, pos)
        if m is None or m.end() == pos:
            raise ScalarParseError(f"malformed scalar {text!r} at column {pos + 1}")
        if nterms and m.group("sign") is None:
            raise ScalarParseError(f"missing operator in {text!r} at column {pos + 1}")
        sgn = -1 if m.group("sign") == "-" else 1
        if m.group("d2") is not None:
            coef, surd = Fraction(1), int(m.group("d2"))
        else:
            den = int(m.group("den") or 1)
            if den == 0:
                raise ScalarParseError(f"zero denominator in {text!r}")
            coef = Fraction(int(m.group("num")), den)
            surd = int(m.group("d1")) if m.group("d1") is not None else None
        if surd is None:
            term = ExactScalar(sgn * coef)
        else:
            if surd != 1 and not is_squarefree(surd):
                raise ScalarParseError(f"d={surd} is not squarefree")
            if d is not None and surd not in (d, 1) and d != 0:
                raise FieldMismatchError(f"sqrt({surd}) used in a session with d={d}")
            if d == 0 and surd != 1:
                raise FieldMismatchError(f"sqrt({surd}) used in a rational session")
            term = ExactScalar(0, sgn * coef, surd)
        try:
            total = total + term
        except FieldMismatchError as exc:
            raise FieldMismatchError(f"mixed surds in {text!r}") from exc
        nterms += 1
        pos = m.end()
    return total


@dataclass(frozen=True)
class Params:
    """``(c, mu, nu)`` with mu, nu reduced into [0, 1) and the field tag ``d``."""

    c: int
    mu: ExactScalar
    nu: ExactScalar
    d: int = 0

    def __post_init__(self):
        if int(self.c) != self.c or self.c < 1:
            raise ValueError("c must be a positive integer")
        mu = ExactScalar.coerce(self.mu)
        nu = ExactScalar.coerce(self.nu)
        d = self.d
        for s in (mu, nu):
            if s.d:
                if d and d != s.d:
                    raise FieldMismatchError(f"parameter in sqrt({s.d}) but d={d}")
                d = s.d
        object.__setattr__(self, "c", int(self.c))
        object.__setattr__(self, "mu", mu.floor_mod1()[1])
        object.__setattr__(self, "nu", nu.floor_mod1()[1])
        object.__setattr__(self, "d", d)

    @property
    def is_rational(self) -> bool:
        return self.mu.is_rational and self.nu.is_rational

    def to_json(self) -> dict:
        return {"c": self.c, "mu": str(self.mu), "nu": str(self.nu), "d": self.d}
