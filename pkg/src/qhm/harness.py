"""Seeded random elements and the verification suites behind ``qhm verify``.

Every suite takes an explicit ``numpy.random.Generator`` and returns a
:class:`Report` whose JSON form is a pure function of the inputs, so two runs
with the same seed serialize to identical bytes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import expr as E
from .crossed import (
    crossed_max_difference,
    embed,
    torus_eval,
    untwisted_eval,
    verify_lemma_coc,
)
from .element import (
    QhmElement,
    check_covariance,
    decompose_delta,
    delta_functions,
    max_difference,
    unit,
)
from .norms import block_singular_values, nested_specs, norm_lower_bound, section_norm, theta_blocks, theta_tilde_blocks
from .scalar import Params, parse_scalar
from .traces import HaarMeasure, invariant_measures, strip_mass, trace, trace_is_tracial


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Counter-based generator for the sub-stream ``stream`` of ``seed``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), *map(int, stream)])))


# the parameter sets used by the full suite
STANDARD_PARAMS = (
    Params(1, parse_scalar("1/4"), parse_scalar("1/6")),
    Params(2, parse_scalar("1/3"), parse_scalar("1/5")),
    Params(1, parse_scalar("1/2*sqrt(2)"), parse_scalar("1/3")),
    Params(3, parse_scalar("-1/2+1/2*sqrt(5)"), parse_scalar("-2+sqrt(5)")),
)


@dataclass
class Report:
    name: str
    params: Params | None
    samples: int
    tolerance: float
    deviations: dict[str, float]
    tolerances: dict[str, float] = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    def limit(self, key: str) -> float:
        return self.tolerances.get(key, self.tolerance)

    @property
    def passed(self) -> bool:
        return all(v < self.limit(k) for k, v in self.deviations.items())

    def to_json(self) -> dict:
        out = {
            "check": self.name,
            "samples": self.samples,
            "tolerance": self.tolerance,
            "max_deviation": {k: self.deviations[k] for k in sorted(self.deviations)},
            "passed": self.passed,
        }
        if self.tolerances:
            out["tolerances"] = dict(sorted(self.tolerances.items()))
        if self.params is not None:
            out["params"] = self.params.to_json()
        out.update(self.extra)
        return out


# random elements


def random_trig(rng: np.random.Generator, bandwidth: int = 2, terms: int = 3) -> E.Expr:
    """Sum of ``terms`` monomials a e(jx + ky) with small rational a and |j|, |k| <= bandwidth."""
    parts = []
    for _ in range(terms):
        j, k = (int(v) for v in rng.integers(-bandwidth, bandwidth + 1, 2))
        re, im = (Fraction(int(n), int(m)) for n, m in zip(rng.integers(-4, 5, 2), rng.integers(1, 5, 2)))
        parts.append(E.prod(E.Const(re, im), E.Exp(j, k, 0)))
    return E.add(*parts)


def random_element(
    rng: np.random.Generator,
    params: Params,
    bound: int = 3,
    n_components: int = 2,
    bandwidth: int = 2,
    smooth: bool = False,
) -> QhmElement:
    """Random element supported in [-bound, bound].

    With ``smooth=True`` each component carries a factor sin(pi x)^6, which
    vanishes to high order at the seam, so the element is continuous and its
    traces converge fast under the midpoint rule.
    """
    ps = rng.choice(np.arange(-bound, bound + 1), size=n_components, replace=False)
    comps = {}
    for p in sorted(int(v) for v in ps):
        f = random_trig(rng, bandwidth)
        if smooth:
            f = E.prod(f, E.power(E.SinPi(1, 0, 0), 6))
        comps[p] = f
    el = QhmElement(params, comps)
    return el if el.components else unit(params)


def _points(rng: np.random.Generator, n: int, lo: float = 0.0, hi: float = 1.0):
    return rng.uniform(lo, hi, n), rng.uniform(0.0, 1.0, n)


# suites


def verify_cocycle(params: Params, rng: np.random.Generator, samples: int = 1000, tol: float = 1e-10) -> Report:
    rep = verify_lemma_coc(params, samples, rng, tol=tol)
    return Report("cocycle", params, samples, tol, rep.deviations)


def verify_embedding(
    params: Params,
    rng: np.random.Generator,
    pairs: int = 20,
    samples: int = 256,
    tol: float = 1e-9,
    sigma_tol: float = 1e-12,
) -> Report:
    dev = {"J_product": 0.0, "J_adjoint": 0.0, "J_direct": 0.0, "sigma_invariance": 0.0}
    for _ in range(pairs):
        a = random_element(rng, params)
        b = random_element(rng, params)
        xs, ys = _points(rng, samples)
        ab = a * b
        Jab = embed(ab)
        dev["J_product"] = max(dev["J_product"], crossed_max_difference(Jab, embed(a) * embed(b), xs, ys))
        dev["J_adjoint"] = max(dev["J_adjoint"], crossed_max_difference(embed(a.star()), embed(a).star(), xs, ys))
        # the tree form of J agrees with the direct cocycle formula
        for p in Jab.support:
            d = np.abs(torus_eval(Jab, xs, ys, p) - untwisted_eval(ab, xs, ys, p))
            dev["J_direct"] = max(dev["J_direct"], float(d.max()))
        # f_{Phi,p} = H_p Phi(., p) is sigma-invariant on R x T
        k = rng.integers(-3, 4, samples)
        for p in ab.support:
            moved = untwisted_eval(ab, xs + k, ys, p)
            base = untwisted_eval(ab, xs, ys, p)
            dev["sigma_invariance"] = max(dev["sigma_invariance"], float(np.abs(moved - base).max()))
    return Report(
        "embedding", params, samples, tol, dev,
        tolerances={"sigma_invariance": sigma_tol},
        extra={"pairs": pairs},
    )


def verify_partition(
    params: Params, rng: np.random.Generator, samples: int = 512, tol: float = 1e-10, unity_tol: float = 1e-12
) -> Report:
    dev = {"partition_of_unity": 0.0, "reconstruction": 0.0, "partition_exact": 0.0}
    for p in range(-2, 3):
        d1, d2 = delta_functions(params, p)
        xs, ys = _points(rng, samples)
        s = np.abs(E.evaluate(d1, xs, ys)) ** 2 + np.abs(E.evaluate(d2, xs, ys)) ** 2
        dev["partition_of_unity"] = max(dev["partition_of_unity"], float(np.abs(s - 1).max()))
        for x, y in ((Fraction(1, 3), Fraction(1, 7)), (Fraction(1, 2), Fraction(2, 5)), (Fraction(5, 6), 0)):
            v = abs(E.evaluate(d1, x, y)) ** 2 + abs(E.evaluate(d2, x, y)) ** 2
            dev["partition_exact"] = max(dev["partition_exact"], abs(v - 1))
        phi = QhmElement(params, {p: random_trig(rng)})
        a1, b1, a2, b2 = decompose_delta(phi)
        dev["reconstruction"] = max(dev["reconstruction"], max_difference(a1 * b1 + a2 * b2, phi, xs, ys))
    return Report(
        "partition", params, samples, tol, dev,
        tolerances={"partition_of_unity": unity_tol, "partition_exact": unity_tol},
        extra={"p_range": [-2, 2]},
    )


def verify_covariance(
    params: Params, rng: np.random.Generator, elements: int = 10, samples: int = 256, tol: float = 1e-12
) -> Report:
    worst = 0.0
    ks = [-3, -1, 1, 2, 5]
    for _ in range(elements):
        a = random_element(rng, params)
        b = random_element(rng, params)
        xs, ys = _points(rng, samples)
        for el in (a, a * b, a.star()):
            worst = max(worst, check_covariance(el, ks, xs, ys))
    return Report("covariance", params, samples, tol, {"covariance": worst}, extra={"elements": elements})


def verify_tracial(
    params: Params, rng: np.random.Generator, pairs: int = 4, N: int = 512, tol: float = 1e-9
) -> Report:
    dev = {"traciality": 0.0, "unit": 0.0, "positivity": 0.0, "strip_mass": 0.0, "F1_F1star": 0.0}
    measures = invariant_measures(params, N)
    elements = [
        (random_element(rng, params, bound=2, smooth=True), random_element(rng, params, bound=2, smooth=True))
        for _ in range(pairs)
    ]
    # a delta_p / delta_{-p} pair, where the cancellation is nontrivial
    f = E.prod(random_trig(rng), E.power(E.SinPi(1, 0, 0), 6))
    g = E.prod(random_trig(rng), E.power(E.SinPi(1, 0, 0), 6))
    elements.append((QhmElement(params, {2: f}), QhmElement(params, {-2: g})))
    for m in measures:
        for a, b in elements:
            dev["traciality"] = max(dev["traciality"], trace_is_tracial(a, b, m))
            dev["positivity"] = max(dev["positivity"], max(0.0, -trace(a * a.star(), m).real))
        dev["unit"] = max(dev["unit"], abs(trace(unit(params), m) - 1))
        if params.mu <= Fraction(1, 2):
            exact = strip_mass(m, params)
            quad = strip_mass(m, params, method="quadrature")
            dev["strip_mass"] = max(dev["strip_mass"], abs(quad - float(exact)), abs(float(exact) - float(2 * params.mu)))
    F1 = QhmElement(params, {1: E.Abs(E.SinPi(1, 0, 0))})
    dev["F1_F1star"] = abs(trace(F1 * F1.star(), HaarMeasure(N)) - 0.5)
    return Report(
        "tracial", params, N * N, tol, dev,
        extra={"pairs": len(elements), "measures": [type(m).__name__ for m in measures], "N": N},
    )


def verify_norms(
    params: Params, rng: np.random.Generator, elements: int = 10, tol: float = 1e-9
) -> Report:
    sizes, cutoffs = (4, 12, 36), (3, 5, 8)
    dev = {"monotonicity": 0.0, "unit": 0.0, "adjoint_symmetry": 0.0, "crossed_match": 0.0}
    specs = nested_specs(rng, sizes, cutoffs)
    dev["unit"] = max(abs(b - 1) for b in norm_lower_bound(unit(params), specs))
    for _ in range(elements):
        a = random_element(rng, params)
        # the compression property on the raw sections, before any running maximum
        raw = [section_norm(a, s) for s in specs]
        bounds = norm_lower_bound(a, specs)
        adj = norm_lower_bound(a.star(), specs)
        drop = max(0.0, *(x - y for x, y in zip(raw, raw[1:])))
        if any(x > y for x, y in zip(bounds, bounds[1:])):
            drop = float("inf")
        dev["monotonicity"] = max(dev["monotonicity"], drop)
        dev["adjoint_symmetry"] = max(dev["adjoint_symmetry"], max(abs(x - y) for x, y in zip(bounds, adj)))
        sv = block_singular_values(theta_blocks(a, specs[-1]))
        sv2 = block_singular_values(theta_tilde_blocks(embed(a), specs[-1]))
        dev["crossed_match"] = max(dev["crossed_match"], float(np.abs(sv - sv2).max()))
    return Report(
        "norms", params, sizes[-1], tol, dev,
        tolerances={"monotonicity": 1e-12},
        extra={"grid_sizes": list(sizes), "cutoffs": list(cutoffs), "elements": elements},
    )


SUITES = {
    "cocycle": verify_cocycle,
    "embedding": verify_embedding,
    "partition": verify_partition,
    "covariance": verify_covariance,
    "tracial": verify_tracial,
    "norms": verify_norms,
}


def run_suite(name: str, params: Params, seed: int, **kw) -> Report:
    idx = list(SUITES).index(name)
    return SUITES[name](params, make_rng(seed, idx), **kw)


def run_all(seed: int, params_list=STANDARD_PARAMS, N: int = 128) -> dict:
    """Every suite on every standard parameter set; a JSON-ready dict."""
    reports = []
    for i, prm in enumerate(params_list):
        for j, name in enumerate(SUITES):
            rng = make_rng(seed, i, j)
            kw = {"N": N} if name == "tracial" else {}
            reports.append(SUITES[name](prm, rng, **kw).to_json())
    return {"seed": seed, "reports": reports, "passed": all(r["passed"] for r in reports)}
