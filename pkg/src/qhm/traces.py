"""Invariant measures, traces, strip masses and the trace-range group."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from fractions import Fraction
from math import gcd, lcm

import numpy as np

from . import expr as E
from .crossed import in_strip_lattice
from .element import QhmElement, multiply
from .lattice import content, hnf, solve_membership
from .scalar import ExactScalar, Params


class NonInvariantMeasureError(ValueError):
    def __init__(self, defect):
        super().__init__(f"measure is not lambda-invariant (defect {defect})")
        self.defect = defect


class HypothesisWarning(UserWarning):
    """A computation was run outside the hypothesis of the result it checks."""


class WindingDomainError(ValueError):
    pass


# measures

Atoms = tuple[tuple[ExactScalar, Fraction], ...]


@dataclass(frozen=True)
class HaarMeasure:
    """Haar measure on T^2 with an N x N quadrature.

    ``rule="midpoint"`` is the uniform midpoint rule, exact for trigonometric
    polynomials of bandwidth below N/2.  ``rule="split"`` cuts [0, 1) in x at
    the breakpoints of the integrand and uses Gauss-Legendre panels there.
    """

    N: int = 512
    rule: str = "midpoint"
    panel_nodes: int = 48

    def __post_init__(self):
        if self.rule not in ("midpoint", "split"):
            raise ValueError(f"unknown rule {self.rule!r}")


@dataclass(frozen=True)
class AtomicMeasure:
    points: tuple[tuple[ExactScalar, ExactScalar], ...]
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.points) != len(self.weights) or not self.points:
            raise ValueError("need one positive weight per point")
        pts = tuple((_mod1(ExactScalar.coerce(x)), _mod1(ExactScalar.coerce(y))) for x, y in self.points)
        ws = tuple(Fraction(w) for w in self.weights)
        if any(w <= 0 for w in ws) or sum(ws) != 1:
            raise ValueError("weights must be positive and sum to 1")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", ws)


@dataclass(frozen=True)
class ProductMeasure:
    """x-marginal times y-marginal; ``None`` marks a Haar factor."""

    x_atoms: Atoms | None = None
    y_atoms: Atoms | None = None
    N: int = 512
    rule: str = "midpoint"
    panel_nodes: int = 48

    def __post_init__(self):
        if self.rule not in ("midpoint", "split"):
            raise ValueError(f"unknown rule {self.rule!r}")
        for atoms in (self.x_atoms, self.y_atoms):
            if atoms is not None and sum(w for _, w in atoms) != 1:
                raise ValueError("marginal weights must sum to 1")


def _mod1(s: ExactScalar) -> ExactScalar:
    return s.floor_mod1()[1]


def _circle_orbit(alpha: ExactScalar, start: ExactScalar) -> Atoms:
    a = _mod1(alpha)
    if not a.is_rational:
        raise ValueError("finite orbits need a rational rotation")
    n = a.a.denominator
    return tuple((_mod1(start + k * a), Fraction(1, n)) for k in range(n))


def atomic_orbit(params: Params, x0=0, y0=0) -> AtomicMeasure:
    """Uniform measure on the finite lambda-orbit of (x0, y0); needs rational 2mu, 2nu."""
    a, b = _mod1(2 * params.mu), _mod1(2 * params.nu)
    if not (a.is_rational and b.is_rational):
        raise ValueError("finite lambda-orbits need rational 2mu and 2nu")
    n = lcm(a.a.denominator, b.a.denominator)
    x0, y0 = ExactScalar.coerce(x0), ExactScalar.coerce(y0)
    pts = tuple((x0 + k * a, y0 + k * b) for k in range(n))
    return AtomicMeasure(pts, (Fraction(1, n),) * n)


def product_measure(params: Params, x: str = "haar", y: str = "haar", x0=0, y0=0, N: int = 512):
    """Product of Haar or rotation-orbit marginals; each is invariant on its own."""
    xa = None if x == "haar" else _circle_orbit(2 * params.mu, ExactScalar.coerce(x0))
    ya = None if y == "haar" else _circle_orbit(2 * params.nu, ExactScalar.coerce(y0))
    return ProductMeasure(xa, ya, N)


def invariant_measures(params: Params, N: int = 512) -> list:
    """The constructively invariant measures available for these parameters."""
    out: list = [HaarMeasure(N)]
    a_rat = _mod1(2 * params.mu).is_rational
    b_rat = _mod1(2 * params.nu).is_rational
    if a_rat and b_rat:
        out.append(atomic_orbit(params))
        out.append(atomic_orbit(params, Fraction(1, 7), Fraction(2, 11)))
    if a_rat:
        out.append(product_measure(params, x="orbit", x0=Fraction(1, 5), N=N))
    if b_rat:
        out.append(product_measure(params, y="orbit", y0=Fraction(1, 3), N=N))
    return out


def _atoms_defect(atoms: Atoms, alpha: ExactScalar) -> Fraction:
    mass: dict[ExactScalar, Fraction] = {}
    for pt, w in atoms:
        mass[pt] = mass.get(pt, 0) + w
    moved: dict[ExactScalar, Fraction] = {}
    for pt, w in atoms:
        q = _mod1(pt + alpha)
        moved[q] = moved.get(q, 0) + w
    keys = set(mass) | set(moved)
    return sum((abs(mass.get(k, 0) - moved.get(k, 0)) for k in keys), Fraction(0))


def invariance_defect(m, params: Params) -> Fraction:
    """Total-variation distance between m and lambda_1 pushed forward m (exact)."""
    if isinstance(m, HaarMeasure):
        return Fraction(0)
    if isinstance(m, AtomicMeasure):
        mass: dict = {}
        moved: dict = {}
        for (x, y), w in zip(m.points, m.weights):
            mass[(x, y)] = mass.get((x, y), 0) + w
            q = (_mod1(x + 2 * params.mu), _mod1(y + 2 * params.nu))
            moved[q] = moved.get(q, 0) + w
        keys = set(mass) | set(moved)
        return sum((abs(mass.get(k, 0) - moved.get(k, 0)) for k in keys), Fraction(0))
    if isinstance(m, ProductMeasure):
        out = Fraction(0)
        if m.x_atoms is not None:
            out += _atoms_defect(m.x_atoms, 2 * params.mu)
        if m.y_atoms is not None:
            out += _atoms_defect(m.y_atoms, 2 * params.nu)
        return out
    raise TypeError(f"unknown measure {m!r}")


def function_invariance_defect(m, params: Params, f: E.Expr) -> float:
    """|int f o lambda_1 dm - int f dm| for a torus function f."""
    moved = E.translate(E.Wrap(f), 2 * params.mu, 2 * params.nu)
    return abs(integrate(m, moved) - integrate(m, f))


# quadrature


def _haar_grid(N: int) -> np.ndarray:
    return (np.arange(N) + 0.5) / N


def _haar_x_rule(m: HaarMeasure, f: E.Expr) -> tuple[np.ndarray, np.ndarray]:
    if m.rule == "midpoint":
        return _haar_grid(m.N), np.full(m.N, 1.0 / m.N)
    cuts = sorted({ExactScalar(0)} | E.x_breakpoints(f))
    edges = [float(c) for c in cuts] + [1.0]
    t, w = np.polynomial.legendre.leggauss(m.panel_nodes)
    xs, ws = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        if b <= a:
            continue
        xs.append(a + (b - a) * (t + 1) / 2)
        ws.append(w * (b - a) / 2)
    return np.concatenate(xs), np.concatenate(ws)


def _exact_grid(N: int) -> list[Fraction]:
    return [Fraction(2 * j + 1, 2 * N) for j in range(N)]


def _weighted_sum(weights, values) -> complex:
    """sum w_i v_i for rational weights, accumulated as fsum(n_i v_i) / D."""
    D = lcm(*(w.denominator for w in weights))
    terms = [complex(v) * (w.numerator * (D // w.denominator)) for w, v in zip(weights, values)]
    return complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms)) / D


def _midpoint_mean(vals: np.ndarray) -> complex:
    return complex(math.fsum(vals.real.ravel()), math.fsum(vals.imag.ravel())) / vals.size


def integrate(m, f: E.Expr) -> complex:
    """Integral of the torus function f (a tree on [0,1)^2) against m.

    Every measure here is a probability, so constants integrate exactly.
    """
    if isinstance(f, E.Const):
        return f.value
    if isinstance(m, HaarMeasure):
        xs, wx = _haar_x_rule(m, f)
        X, Y = np.meshgrid(xs, _haar_grid(m.N), indexing="ij")
        vals = E.evaluate(f, X, Y)
        if m.rule == "midpoint":
            return _midpoint_mean(vals)
        return complex(np.sum(wx[:, None] * vals) / m.N)
    if isinstance(m, AtomicMeasure):
        return _weighted_sum(m.weights, [E.evaluate(f, x, y) for x, y in m.points])
    if isinstance(m, ProductMeasure):
        haar = HaarMeasure(m.N, m.rule, m.panel_nodes)
        ys = _haar_grid(m.N)
        if m.x_atoms is None:
            if m.y_atoms is None:
                return integrate(haar, f)
            xs, wx = _haar_x_rule(haar, f)
            inner = [complex(np.sum(wx * E.evaluate(f, xs, float(y)))) for y, _ in m.y_atoms]
            return _weighted_sum([w for _, w in m.y_atoms], inner)
        if m.y_atoms is None:
            inner = [_midpoint_mean(E.evaluate(f, x, ys)) for x, _ in m.x_atoms]
        else:
            inner = [_weighted_sum([w for _, w in m.y_atoms], [E.evaluate(f, x, y) for y, _ in m.y_atoms])
                     for x, _ in m.x_atoms]
        return _weighted_sum([w for _, w in m.x_atoms], inner)
    raise TypeError(f"unknown measure {m!r}")


# conditional expectation and traces


def cond_expect(phi: QhmElement) -> E.Expr:
    """E(Phi) = Phi(., ., 0) as a torus function."""
    return phi.components.get(0, E.ZERO)


def trace(phi: QhmElement, m) -> complex:
    defect = invariance_defect(m, phi.params)
    if defect:
        raise NonInvariantMeasureError(defect)
    return integrate(m, cond_expect(phi))


def trace_is_tracial(phi: QhmElement, psi: QhmElement, m) -> float:
    """|tau(Phi * Psi) - tau(Psi * Phi)|."""
    return abs(trace(multiply(phi, psi), m) - trace(multiply(psi, phi), m))


def strip_mass(m, params: Params, method: str = "exact"):
    """Mass of the strip [0, 2mu) x T.

    ``method="exact"`` returns an ExactScalar / Fraction; ``"quadrature"``
    integrates the strip indicator (Haar uses breakpoint-split panels).
    """
    if params.mu > Fraction(1, 2):
        warnings.warn("strip mass law assumes mu <= 1/2", HypothesisWarning, stacklevel=2)
    two_mu = 2 * params.mu
    if method == "quadrature":
        strip = E.Chi(0, two_mu)
        if isinstance(m, HaarMeasure):
            m = HaarMeasure(m.N, "split", m.panel_nodes)
        elif isinstance(m, ProductMeasure):
            m = replace(m, rule="split")
        return integrate(m, strip).real
    if method != "exact":
        raise ValueError(f"unknown method {method!r}")
    if isinstance(m, HaarMeasure) or (isinstance(m, ProductMeasure) and m.x_atoms is None):
        return min(two_mu, ExactScalar(1))
    atoms = m.x_atoms if isinstance(m, ProductMeasure) else tuple(
        (x, w) for (x, _), w in zip(m.points, m.weights)
    )
    return sum((w for x, w in atoms if x < two_mu), Fraction(0))


# trace range


@dataclass(frozen=True)
class TraceRangeGroup:
    """The subgroup (1/D) * rowspace(H) of R in coordinates {1, sqrt(d)}."""

    d: int
    D: int
    H: tuple[tuple[int, ...], ...]

    def contains(self, s) -> bool:
        s = ExactScalar.coerce(s)
        if s.d and s.d != self.d:
            return False
        coords = [s.a * self.D] if self.d == 0 else [s.a * self.D, s.b * self.D]
        if any(c.denominator != 1 for c in coords):
            return False
        return solve_membership([list(r) for r in self.H], [int(c) for c in coords])

    def to_json(self) -> dict:
        out = {"D": self.D, "H": [list(r) for r in self.H]}
        if self.d:
            out["d"] = self.d
        return out

    def __str__(self):
        gens = []
        for row in self.H:
            s = ExactScalar(Fraction(row[0], self.D), Fraction(row[1], self.D) if self.d else 0, self.d)
            gens.append(f"({s})Z")
        return " + ".join(gens)


def _coords(s: ExactScalar, d: int) -> list[Fraction]:
    return [s.a] if d == 0 else [s.a, s.b]


def trace_range(params: Params, d: int | None = None) -> TraceRangeGroup:
    """Canonical form of Z + 2mu Z + 2nu Z."""
    return trace_range_of(params.mu, params.nu, params.d if d is None else d)


def trace_range_of(mu, nu, d: int = 0) -> TraceRangeGroup:
    """As ``trace_range`` but for unreduced scalars mu, nu in Q(sqrt(d))."""
    gens = [ExactScalar(1), 2 * ExactScalar.coerce(mu), 2 * ExactScalar.coerce(nu)]
    for g in gens:
        if g.d and g.d != d:
            raise ValueError(f"generator {g} outside Q(sqrt({d}))")
    vecs = [_coords(g, d) for g in gens]
    D = lcm(*(c.denominator for v in vecs for c in v))
    H = hnf([[int(c * D) for c in v] for v in vecs])
    g = gcd(D, content(x for r in H for x in r))
    return TraceRangeGroup(d, D // g, tuple(tuple(x // g for x in r) for r in H))


# Delta^lambda winding value


@dataclass(frozen=True)
class WindingResult:
    fixed: bool
    value: ExactScalar | None = None

    def to_json(self) -> dict:
        return {"fixed": self.fixed, "value": None if self.value is None else str(self.value)}


def delta_lambda_winding(params: Params, breakpoints, windings) -> WindingResult:
    """Winding value of the strip unitary u = e(n_i y) on [t_i, t_{i+1}).

    Its K_1 class is fixed by lambda exactly when every n_i equals n_0, and then
    the value is 2 n_0 nu.
    """
    bps = [ExactScalar.coerce(b) for b in breakpoints]
    ws = [int(n) for n in windings]
    if len(ws) != len(bps) + 1:
        raise WindingDomainError("need one winding number per strip (len(breakpoints) + 1)")
    prev = ExactScalar(0)
    for b in bps:
        if not (prev < b < 1):
            raise WindingDomainError("breakpoints must increase strictly inside (0, 1)")
        if not in_strip_lattice(b, params.mu):
            raise WindingDomainError(f"breakpoint {b} is not in 2mu Z + Z")
        prev = b
    if all(n == ws[0] for n in ws):
        return WindingResult(True, 2 * ws[0] * params.nu)
    return WindingResult(False)


def unique_trace_certified(params: Params) -> bool:
    """Whether {1, mu, nu} is certified Q-linearly independent.

    Inside a single quadratic field three numbers are always Q-dependent, so
    this never certifies uniqueness of the trace; it returns False.
    """
    vecs = [[Fraction(1), Fraction(0)], [params.mu.a, params.mu.b], [params.nu.a, params.nu.b]]
    # rank of a 3 x 2 rational matrix is at most 2
    rank = 0
    rows = [list(v) for v in vecs]
    for col in range(2):
        piv = next((r for r in rows if r[col] != 0), None)
        if piv is None:
            continue
        rows.remove(piv)
        rows = [[a - r[col] / piv[col] * b for a, b in zip(r, piv)] for r in rows]
        rank += 1
    return rank == 3
