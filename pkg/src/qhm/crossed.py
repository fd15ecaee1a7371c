"""Group actions, cocycles and the embedding into the crossed product.

On M = R x T:  sigma_k(x, y) = (x - k, y),  lambda_k(x, y) = (x + 2k mu, y + 2k nu),
u(p, k)(y) = e(c k p (y - p nu)).  Automorphisms act on functions by
(lambda_p f)(m) = f(lambda_{-p} m).

The lambda-cocycle H is built from H_1(x, y) = e(c floor(x) (y - nu)) by

    H_p(m) = prod_{j=0}^{p-1} H_1(lambda_{-j} m)            (p > 0)
    H_p(m) = prod_{j=p}^{-1} conj H_1(lambda_{-j} m)        (p < 0)

and an element Phi is untwisted to the torus function H_p(m) Phi(m, p).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

import numpy as np

from . import expr as E
from .element import ParamsMismatchError, QhmElement, extend_eval
from .scalar import ExactScalar, Params



def lambda_act(params: Params, k: int, x, y, torus: bool = False):
    """lambda_k(x, y).  Exact when x, y are exact; reduced mod 1 only on the torus."""
    if isinstance(x, (int, Fraction, ExactScalar)):
        x2 = ExactScalar.coerce(x) + 2 * k * params.mu
        y2 = ExactScalar.coerce(y) + 2 * k * params.nu
        if torus:
            x2, y2 = x2.floor_mod1()[1], y2.floor_mod1()[1]
        return x2, y2
    x2 = np.asarray(x, float) + 2 * k * float(params.mu)
    y2 = np.asarray(y, float) + 2 * k * float(params.nu)
    if torus:
        x2, y2 = x2 - np.floor(x2), y2 - np.floor(y2)
    return x2, y2


def sigma_act(k: int, x, y):
    """sigma_k(x, y) = (x - k, y)."""
    if isinstance(x, (int, Fraction, ExactScalar)):
        return ExactScalar.coerce(x) - k, y
    return np.asarray(x, float) - k, y


def u_cocycle(params: Params, p, k, y):
    """u(p, k)(y) = e(c k p (y - p nu)); vectorized over p, k, y."""
    p = np.asarray(p)
    n = params.c * np.asarray(k) * p
    if p.ndim == 0:
        return E.int_phase(n, y, int(p) * params.nu)
    # the exact shift depends on p: go through each distinct p
    n, p, y = np.broadcast_arrays(n, p, np.asarray(y, float))
    out = np.empty(y.shape, complex)
    for pv in np.unique(p):
        sel = p == pv
        out[sel] = E.int_phase(n[sel], y[sel], int(pv) * params.nu)
    return out


def h_cocycle(params: Params, p, x, y):
    """H_p at points of R x T (float arrays); ``p`` may be an integer array.

    The j-th factor is H_1(lambda_{-j} m) = e(c floor(x - 2j mu) (y - (2j+1) nu)),
    so its phase is an integer times y minus an exact shift.
    """
    p, x, y = np.broadcast_arrays(np.asarray(p, dtype=int), np.asarray(x, float), np.asarray(y, float))
    out = np.ones(x.shape, complex)
    if not p.size:
        return out
    mu2 = 2 * float(params.mu)
    for j in range(min(int(p.min()), 0), max(int(p.max()), 0)):
        # factor j enters H_p for 0 <= j < p, and conjugated for p <= j < 0
        sel = p > j if j >= 0 else p <= j
        if not sel.any():
            continue
        sign = 1 if j >= 0 else -1
        n = sign * params.c * np.floor(x[sel] - j * mu2)
        out[sel] *= E.int_phase(n, y[sel], (2 * j + 1) * params.nu)
    return out


def h_tree(params: Params, p: int) -> E.Expr:
    """H_p restricted to F as a product of floor-phase factors."""
    c, mu, nu = params.c, params.mu, params.nu
    factors = []
    if p > 0:
        # j = 0 factor is identically 1 on F
        for j in range(1, p):
            factors.append(E.FloorPhase(c, -(2 * j + 1) * nu, -2 * j * mu))
    elif p < 0:
        for j in range(p, 0):
            factors.append(E.FloorPhase(-c, -(2 * j + 1) * nu, -2 * j * mu))
    return E.prod(*factors)


@dataclass(frozen=True, eq=False)
class CrossedElement:
    """Finitely supported p -> F_p with F_p a function on the torus T^2.

    Components are trees evaluated after reducing (x, y) mod 1.
    """

    params: Params
    components: Mapping[int, E.Expr]

    def __post_init__(self):
        comps = {int(p): f for p, f in self.components.items() if not E._is_const(f, 0)}
        object.__setattr__(self, "components", dict(sorted(comps.items())))

    @property
    def support(self) -> list[int]:
        return list(self.components)

    def __mul__(self, other):
        return cp_multiply(self, other)

    def star(self):
        return cp_adjoint(self)


def torus_eval(F: CrossedElement, x, y, p: int):
    f = F.components.get(p)
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    if f is None:
        return np.zeros(np.broadcast_shapes(x.shape, y.shape), complex)
    return E.evaluate(f, x - np.floor(x), y - np.floor(y))


def _torus_translate(f: E.Expr, u, v) -> E.Expr:
    u = ExactScalar.coerce(u)
    v = ExactScalar.coerce(v)
    if not u and not v:
        return f
    return E.translate(E.Wrap(f), u, v)


def cp_multiply(F: CrossedElement, G: CrossedElement) -> CrossedElement:
    """(F * G)(m, p) = sum_q F(m, q) G(lambda_{-q} m, p - q) on the torus."""
    if F.params != G.params:
        raise ParamsMismatchError(f"{F.params} != {G.params}")
    prm = F.params
    terms: dict[int, list[E.Expr]] = {}
    for q, fq in F.components.items():
        for r, gr in G.components.items():
            shifted = _torus_translate(gr, -2 * q * prm.mu, -2 * q * prm.nu)
            terms.setdefault(q + r, []).append(E.prod(fq, shifted))
    return CrossedElement(prm, {p: E.add(*ts) for p, ts in terms.items()})


def cp_adjoint(F: CrossedElement) -> CrossedElement:
    """F^*(m, p) = conj F(lambda_{-p} m, -p)."""
    prm = F.params
    out = {}
    for q, f in F.components.items():
        p = -q
        out[p] = E.conj(_torus_translate(f, -2 * p * prm.mu, -2 * p * prm.nu))
    return CrossedElement(prm, out)


def cp_unit(params: Params) -> CrossedElement:
    return CrossedElement(params, {0: E.ONE})


def embed(phi: QhmElement) -> CrossedElement:
    """J(Phi)(m, p) = H_p(m) Phi(m, p), read off on F."""
    prm = phi.params
    return CrossedElement(prm, {p: E.prod(h_tree(prm, p), f) for p, f in phi.components.items()})


def untwisted_eval(phi: QhmElement, x, y, p: int):
    """H_p(m) Phi(m, p) at arbitrary m in R x T (direct formula, no trees)."""
    return h_cocycle(phi.params, p, x, y) * extend_eval(phi, x, y, p)


def crossed_max_difference(A: CrossedElement, B: CrossedElement, xs, ys) -> float:
    worst = 0.0
    for p in set(A.components) | set(B.components):
        diff = torus_eval(A, xs, ys, p) - torus_eval(B, xs, ys, p)
        worst = max(worst, float(np.max(np.abs(diff), initial=0.0)))
    return worst


# the strip lattice 2 mu Z + Z


def in_strip_lattice(b: ExactScalar, mu: ExactScalar) -> bool:
    """Whether b (mod 1) lies in 2 mu Z + Z."""
    b = ExactScalar.coerce(b)
    two_mu = 2 * mu
    if not two_mu.is_rational:
        if b.d and b.d != two_mu.d:
            return False
        k = b.b / two_mu.b
        if k.denominator != 1:
            return False
        rest = b - k * two_mu
        return rest.is_rational and rest.a.denominator == 1
    if not b.is_rational:
        return False
    # Z + (n/D) Z = (1/D) Z for n/D in lowest terms
    den = two_mu.a.denominator
    return (b.a * den).denominator == 1


def jump_breakpoints(F: CrossedElement) -> dict[int, set[ExactScalar]]:
    """Possible jump locations in x (floors, wraps, indicator ends), per component."""
    return {p: E.x_breakpoints(f, chi=True, kinks=False) for p, f in F.components.items()}


def a_grammar_defects(F: CrossedElement) -> dict[int, list[ExactScalar]]:
    """Jump locations that fall outside 2 mu Z + Z (empty when in A)."""
    mu = F.params.mu
    return {
        p: sorted(b for b in bps if not in_strip_lattice(b, mu))
        for p, bps in jump_breakpoints(F).items()
    }


# sampled verification of the cocycle identities


@dataclass
class CocycleReport:
    params: Params
    samples: int
    tolerance: float
    deviations: dict[str, float]

    @property
    def passed(self) -> bool:
        return all(v < self.tolerance for v in self.deviations.values())

    def to_json(self) -> dict:
        return {
            "params": self.params.to_json(),
            "samples": self.samples,
            "tolerance": self.tolerance,
            "max_deviation": {k: self.deviations[k] for k in sorted(self.deviations)},
            "passed": self.passed,
        }


def verify_lemma_coc(
    params: Params, samples: int, rng: np.random.Generator, bound: int = 4, tol: float = 1e-10
) -> CocycleReport:
    """Max deviations of the H- and u-cocycle identities over random samples.

    Indices p, q, k, l are drawn from [-bound, bound]; points from
    [-bound - 1, bound + 1) x [0, 1).
    """
    mu2, nu2 = 2 * float(params.mu), 2 * float(params.nu)
    x = rng.uniform(-bound - 1, bound + 1, samples)
    y = rng.uniform(0, 1, samples)
    p, q, k, l = (rng.integers(-bound, bound + 1, samples) for _ in range(4))

    def worst(a, b) -> float:
        return float(np.max(np.abs(a - b), initial=0.0))

    Hp = h_cocycle(params, p, x, y)
    # H_{p+q}(m) = H_p(m) H_q(lambda_{-p} m)
    shifted = (x - p * mu2, y - p * nu2)
    dev = {"H_cocycle": worst(h_cocycle(params, p + q, x, y), Hp * h_cocycle(params, q, *shifted))}
    # H_p(m) = conj H_{-p}(lambda_{-p} m)
    dev["H_reflection"] = worst(np.conj(h_cocycle(params, -p, *shifted)), Hp)
    # H_p(sigma_{-k} m) = u(p, k)(m) H_p(m)
    dev["H_sigma"] = worst(h_cocycle(params, p, x + k, y), u_cocycle(params, p, k, y) * Hp)
    # u(p+q, k)(y) = u(p, k)(y) u(q, k)(y - 2 p nu)
    dev["u_lambda"] = worst(
        u_cocycle(params, p + q, k, y), u_cocycle(params, p, k, y) * u_cocycle(params, q, k, y - p * nu2)
    )
    # u(p, k + l) = u(p, k) u(p, l); sigma acts trivially on y
    dev["u_sigma"] = worst(u_cocycle(params, p, k + l, y), u_cocycle(params, p, k, y) * u_cocycle(params, p, l, y))
    return CocycleReport(params, samples, tol, dev)
