"""The dense subalgebra of the quantum Heisenberg manifold.

An element is a finitely supported family ``p -> Phi_p`` of functions on the
fundamental domain F = [0,1) x [0,1).  Values off F are never stored; they are
produced by the covariance rule

    Phi(x + k, y, p) = e(-c p k (y - p nu)) * Phi(x, y, p),

so covariance holds by construction.  Products and adjoints are again closed
expression trees on F.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np

from . import expr as E
from .scalar import ExactScalar, Params

SEAM_TOL = 1e-9


class ParamsMismatchError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class QhmElement:
    params: Params
    components: Mapping[int, E.Expr]

    def __post_init__(self):
        comps = {int(p): f for p, f in self.components.items() if not E._is_const(f, 0)}
        object.__setattr__(self, "components", dict(sorted(comps.items())))

    @property
    def support(self) -> list[int]:
        return list(self.components)

    def __add__(self, other: QhmElement) -> QhmElement:
        _check_params(self, other)
        out = dict(self.components)
        for p, f in other.components.items():
            out[p] = E.add(out[p], f) if p in out else f
        return QhmElement(self.params, out)

    def scale(self, k) -> QhmElement:
        k = E.const(k) if not isinstance(k, E.Const) else k
        return QhmElement(self.params, {p: E.prod(k, f) for p, f in self.components.items()})

    def __mul__(self, other: QhmElement) -> QhmElement:
        return multiply(self, other)

    def star(self) -> QhmElement:
        return adjoint(self)


def _check_params(a, b):
    if a.params != b.params:
        raise ParamsMismatchError(f"{a.params} != {b.params}")


def unit(params: Params) -> QhmElement:
    return QhmElement(params, {0: E.ONE})


def delta(params: Params, p: int, f: E.Expr) -> QhmElement:
    """The single-component element f * delta_p."""
    return QhmElement(params, {p: f})


def covariance_phase(params: Params, p: int, k, y):
    """e(-c p k (y - p nu)): the factor relating Phi(x+k, y, p) to Phi(x, y, p)."""
    return E.int_phase(-params.c * p * np.asarray(k), y, p * params.nu)


def extend_eval(phi: QhmElement, x, y, p: int):
    """Value of the covariant extension of ``phi`` at (x, y, p), (x, y) in R x T."""
    f = phi.components.get(p)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if f is None:
        return np.zeros(np.broadcast_shapes(x.shape, y.shape), dtype=complex)
    k = np.floor(x)
    y0 = y - np.floor(y)
    return covariance_phase(phi.params, p, k, y) * E.evaluate(f, x - k, y0)


def extended(params: Params, f: E.Expr, r: int, u, v) -> E.Expr:
    """Tree for the extension of component ``f`` (index r), translated by (u, v).

    On F it evaluates to Phi^ext(x + u, y + v, r).
    """
    body = E.Wrap(f)
    if r:
        body = E.prod(E.FloorPhase(-params.c * r, -r * params.nu, 0), body)
    u = ExactScalar.coerce(u)
    v = ExactScalar.coerce(v)
    if not u and not v:
        # on F the floor is 0 and the wrap is the identity
        return f
    return E.translate(body, u, v)


def multiply(phi: QhmElement, psi: QhmElement) -> QhmElement:
    """(Phi * Psi)(m, p) = sum_q Phi(m, q) Psi(lambda_{-q} m, p - q)."""
    _check_params(phi, psi)
    prm = phi.params
    terms: dict[int, list[E.Expr]] = {}
    for q, fq in phi.components.items():
        for r, gr in psi.components.items():
            shifted = extended(prm, gr, r, -2 * q * prm.mu, -2 * q * prm.nu)
            terms.setdefault(q + r, []).append(E.prod(fq, shifted))
    return QhmElement(prm, {p: E.add(*ts) for p, ts in terms.items()})


def adjoint(phi: QhmElement) -> QhmElement:
    """Phi^*(m, p) = conj Phi(lambda_{-p} m, -p)."""
    prm = phi.params
    out = {}
    for q, f in phi.components.items():
        p = -q
        out[p] = E.conj(extended(prm, f, q, -2 * p * prm.mu, -2 * p * prm.nu))
    return QhmElement(prm, out)


def seam_defects(phi: QhmElement, ys=None, eps: float = 1e-12) -> dict[int, float]:
    """Per component: max |Phi(1-, y) - e(-c p (y - p nu)) Phi(0, y)|.

    Zero (up to rounding) exactly when the component glues continuously across
    the seam x = 1, i.e. when the element is a genuine member of the continuous
    subalgebra rather than a bounded Borel one.
    """
    if ys is None:
        ys = (np.arange(64) + 0.5) / 64
    ys = np.asarray(ys, float)
    out = {}
    for p, f in phi.components.items():
        left = E.evaluate(f, np.full_like(ys, 1 - eps), ys)
        right = covariance_phase(phi.params, p, 1, ys) * E.evaluate(f, np.zeros_like(ys), ys)
        out[p] = float(np.max(np.abs(left - right)))
    return out


def seam_flags(phi: QhmElement, tol: float = SEAM_TOL) -> dict[int, bool]:
    return {p: dev <= tol for p, dev in seam_defects(phi).items()}


# partition of unity and the delta_p decomposition


def delta_functions(params: Params, p: int) -> tuple[E.Expr, E.Expr]:
    """(Delta_1, Delta_2) on F for the choice d(x) = sin^2(pi x).

    Delta_1 = |sin pi x|;  Delta_2 = |cos pi x| on [0, 1/2) and
    |cos pi x| e(-c p y + c p^2 nu) on [1/2, 1).
    """
    c = params.c
    d1 = E.Abs(E.SinPi(1, 0, 0))
    twist = E.Exp(0, -c * p, c * p * p * params.nu)
    d2 = E.prod(
        E.Abs(E.CosPi(1, 0, 0)),
        E.add(E.Chi(0, Fraction(1, 2)), E.prod(E.Chi(Fraction(1, 2), 1), twist)),
    )
    return d1, d2


def decompose_delta(phi: QhmElement) -> tuple[QhmElement, QhmElement, QhmElement, QhmElement]:
    """Factors (A1, B1, A2, B2) with A1*B1 + A2*B2 = phi for single-component phi.

    A_i = Phi conj(Delta_i) delta_0 and B_i = Delta_i delta_p.
    """
    if len(phi.components) != 1:
        raise ValueError("decompose_delta needs a single-component element")
    [(p, f)] = phi.components.items()
    prm = phi.params
    d1, d2 = delta_functions(prm, p)
    return (
        delta(prm, 0, E.prod(f, E.conj(d1))),
        delta(prm, p, d1),
        delta(prm, 0, E.prod(f, E.conj(d2))),
        delta(prm, p, d2),
    )


def check_covariance(phi: QhmElement, ks, xs, ys, evaluator=extend_eval) -> float:
    """max |u(p,k)(m) Phi(sigma_{-k} m, p) - Phi(m, p)| over samples and k.

    ``evaluator`` defaults to the extension rule; tests swap in a corrupted one.
    """
    xs = np.asarray(xs, float)
    ys = np.asarray(ys, float)
    worst = 0.0
    for p in phi.components:
        base = evaluator(phi, xs, ys, p)
        for k in ks:
            u = np.conj(covariance_phase(phi.params, p, k, ys))
            moved = evaluator(phi, xs + k, ys, p)
            worst = max(worst, float(np.max(np.abs(u * moved - base), initial=0.0)))
    return worst


def sample_values(phi: QhmElement, xs, ys) -> dict[int, np.ndarray]:
    """Component values on F at sample points."""
    return {p: E.evaluate(f, xs, ys) for p, f in phi.components.items()}


def max_difference(a: QhmElement, b: QhmElement, xs, ys) -> float:
    """Pointwise sup-distance of two elements over samples in F."""
    va, vb = sample_values(a, xs, ys), sample_values(b, xs, ys)
    zero = np.zeros(np.broadcast_shapes(np.shape(xs), np.shape(ys)), complex)
    worst = 0.0
    for p in set(va) | set(vb):
        worst = max(worst, float(np.max(np.abs(va.get(p, zero) - vb.get(p, zero)), initial=0.0)))
    return worst
