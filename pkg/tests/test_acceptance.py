"""Acceptance criteria 1-10, each at its stated tolerance.

Every test prints one ``criterion N: PASS|FAIL`` line (visible even when
pytest captures output) before asserting.
"""

from __future__ import annotations

import json
import time
from fractions import Fraction

import pytest

from qhm import expr as E
from qhm.classify import ISOMORPHIC, NOT_ISOMORPHIC, apply_to_params, decide_isomorphism, rational_same_orbit, word
from qhm.element import QhmElement, unit
from qhm.harness import (
    STANDARD_PARAMS,
    make_rng,
    random_element,
    run_all,
    verify_cocycle,
    verify_embedding,
    verify_norms,
    verify_partition,
    verify_tracial,
)
from qhm.norms import nested_specs, norm_lower_bound
from qhm.scalar import ExactScalar, Params, parse_scalar
from qhm.traces import HaarMeasure, delta_lambda_winding, invariant_measures, strip_mass, trace, trace_range_of

from oracles import bfs_orbit, quadratic_trace_range, rational_trace_range

SEED = 20240601


@pytest.fixture
def verdict(capsys):
    def emit(n: int, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'} {detail}")
        assert ok, detail

    return emit


def _worst(reports):
    out: dict = {}
    for rep in reports:
        for k, v in rep.deviations.items():
            out[k] = max(out.get(k, 0.0), v)
    return out


def _fmt(devs) -> str:
    return " ".join(f"{k}={v:.2e}" for k, v in sorted(devs.items()))


def test_criterion_01_cocycle(verdict):
    t0 = time.perf_counter()
    reps = [verify_cocycle(p, make_rng(SEED, 1, i), samples=1000, tol=1e-10) for i, p in enumerate(STANDARD_PARAMS)]
    elapsed = time.perf_counter() - t0
    devs = _worst(reps)
    ok = all(r.samples >= 1000 for r in reps) and max(devs.values()) < 1e-10 and elapsed < 10
    verdict(1, ok, f"{_fmt(devs)} time={elapsed:.2f}s")


def test_criterion_02_embedding(verdict):
    t0 = time.perf_counter()
    reps = [
        verify_embedding(p, make_rng(SEED, 2, i), pairs=20, samples=256, tol=1e-9, sigma_tol=1e-12)
        for i, p in enumerate(STANDARD_PARAMS)
    ]
    elapsed = time.perf_counter() - t0
    devs = _worst(reps)
    ok = (
        max(devs["J_product"], devs["J_adjoint"], devs["J_direct"]) < 1e-9
        and devs["sigma_invariance"] < 1e-12
        and elapsed < 60
    )
    verdict(2, ok, f"{_fmt(devs)} time={elapsed:.2f}s")


def test_criterion_03_partition(verdict):
    reps = [verify_partition(p, make_rng(SEED, 3, i)) for i, p in enumerate(STANDARD_PARAMS)]
    devs = _worst(reps)
    ok = (
        devs["partition_of_unity"] < 1e-12
        and devs["partition_exact"] < 1e-12
        and devs["reconstruction"] < 1e-10
        and all(r.extra["p_range"] == [-2, 2] for r in reps)
    )
    verdict(3, ok, _fmt(devs))


def test_criterion_04_trace(verdict):
    reps = [verify_tracial(p, make_rng(SEED, 4, i), N=512) for i, p in enumerate(STANDARD_PARAMS)]
    devs = _worst(reps)
    # exact normalization and the f = 1 case of F_1 = Delta_1 delta_1
    unit_exact = all(trace(unit(p), m) == 1 for p in STANDARD_PARAMS for m in invariant_measures(p, N=512))
    F1 = QhmElement(STANDARD_PARAMS[0], {1: E.prod(E.ONE, E.Abs(E.SinPi(1, 0, 0)))})
    half = abs(trace(F1 * F1.star(), HaarMeasure(512)) - 0.5)
    ok = devs["traciality"] < 1e-9 and unit_exact and half < 1e-9 and devs["F1_F1star"] < 1e-9
    verdict(4, ok, f"traciality={devs['traciality']:.2e} unit_exact={unit_exact} |tau(F1F1*)-1/2|={half:.2e}")


def test_criterion_05_strip_mass(verdict):
    worst_quad, exact_ok, count = 0.0, True, 0
    for two_mu in (Fraction(1, 3), Fraction(2, 5), Fraction(1, 2)):
        prm = Params(1, two_mu / 2, Fraction(1, 7))
        measures = invariant_measures(prm, N=128)
        assert any(type(m).__name__ == "AtomicMeasure" for m in measures)
        for m in measures:
            count += 1
            exact_ok &= strip_mass(m, prm) == two_mu
            worst_quad = max(worst_quad, abs(strip_mass(m, prm, method="quadrature") - float(two_mu)))
    ok = exact_ok and worst_quad < 1e-9
    verdict(5, ok, f"measures={count} exact={exact_ok} quadrature={worst_quad:.2e}")


def _random_fraction(rng, den=30, span=3):
    q = int(rng.integers(1, den + 1))
    return Fraction(int(rng.integers(-span * q, span * q + 1)), q)


def test_criterion_06_trace_range(verdict):
    rng = make_rng(SEED, 6)
    rat_ok = 0
    for _ in range(100):
        mu, nu = _random_fraction(rng), _random_fraction(rng)
        rat_ok += trace_range_of(mu, nu).to_json() == rational_trace_range(mu, nu)
    quad_ok, total_q = 0, 0
    shift_ok = True
    for d in (2, 5):
        for _ in range(50):
            a, b, c, e = (_random_fraction(rng) for _ in range(4))
            mu, nu = ExactScalar(a, b, d), ExactScalar(c, e, d)
            G = trace_range_of(mu, nu, d)
            total_q += 1
            quad_ok += {"D": G.D, "H": [list(r) for r in G.H]} == quadratic_trace_range((a, b), (c, e))
            n, k = (int(v) for v in rng.integers(-5, 6, 2))
            shift_ok &= trace_range_of(mu + n, nu + k, d) == G
    ok = rat_ok == 100 and quad_ok == total_q and shift_ok
    verdict(6, ok, f"rational={rat_ok}/100 quadratic={quad_ok}/{total_q} shift_invariant={shift_ok}")


def test_criterion_07_classification(verdict):
    rng = make_rng(SEED, 7)
    irr = [p for p in STANDARD_PARAMS if not p.mu.is_rational]
    irr.append(Params(1, parse_scalar("1/3+1/5*sqrt(2)"), parse_scalar("2/7-1/2*sqrt(2)")))
    iso = 0
    for i in range(200):
        length = int(rng.integers(0, 13))
        w = "".join("STR"[int(j)] for j in rng.integers(0, 3, length))
        prm = irr[i % len(irr)]
        iso += decide_isomorphism(prm, apply_to_params(word(w), prm)).kind == ISOMORPHIC
    bfs_ok = True
    for q in range(1, 13):
        label = {}
        for a in range(q):
            for b in range(q):
                if (a, b) not in label:
                    for cell in bfs_orbit(q, (a, b)):
                        label[cell] = (a, b)
        cells = list(label)
        for c1 in cells:
            p1 = Params(1, Fraction(c1[0], q), Fraction(c1[1], q))
            for c2 in cells:
                p2 = Params(1, Fraction(c2[0], q), Fraction(c2[1], q))
                bfs_ok &= rational_same_orbit(p1, p2) == (label[c1] == label[c2])
    p = irr[0]
    cmis = decide_isomorphism(p, Params(p.c + 1, p.mu, p.nu, p.d))
    c_ok = cmis.kind == NOT_ISOMORPHIC and "K0" in cmis.justification
    ok = iso == 200 and bfs_ok and c_ok
    verdict(7, ok, f"words={iso}/200 bfs_q<=12={bfs_ok} c_mismatch={c_ok}")


def test_criterion_08_winding(verdict):
    prm = Params(1, Fraction(1, 4), Fraction(1, 6))
    example = delta_lambda_winding(prm, [Fraction(1, 2)], [3, 3])
    ok = example.fixed and example.value == ExactScalar(1)
    rng = make_rng(SEED, 8)
    prm = Params(1, Fraction(1, 10), parse_scalar("1/6"))  # strips end on multiples of 1/5
    for _ in range(200):
        n = int(rng.integers(1, 6))
        ws = [int(v) for v in rng.integers(-3, 4, n)]
        if rng.random() < 0.5:
            ws = [ws[0]] * n
        bps = sorted(Fraction(int(k), 5) for k in rng.choice(range(1, 5), n - 1, replace=False))
        r = delta_lambda_winding(prm, bps, ws)
        constant = len(set(ws)) == 1
        ok &= r.fixed == constant
        if constant:
            ok &= r.value == 2 * ws[0] * prm.nu
    verdict(8, ok, f"example={example.value} iff_checks=200")


def test_criterion_09_norms(verdict):
    reps = [verify_norms(p, make_rng(SEED, 9, i), elements=10) for i, p in enumerate(STANDARD_PARAMS)]
    devs = _worst(reps)
    specs = nested_specs(make_rng(SEED, 9), (4, 16, 64), (4, 8, 12))
    unit_exact = all(b == 1.0 for p in STANDARD_PARAMS for b in norm_lower_bound(unit(p), specs))
    rng = make_rng(SEED, 9, 99)
    monotone = True
    for _ in range(10):
        a = random_element(rng, STANDARD_PARAMS[2])
        bounds = norm_lower_bound(a, specs)
        monotone &= all(x <= y for x, y in zip(bounds, bounds[1:]))
    # returned bounds are exactly non-decreasing; the raw sections obey compression up to rounding
    ok = monotone and devs["monotonicity"] < 1e-12 and unit_exact and devs["adjoint_symmetry"] < 1e-9
    verdict(
        9, ok,
        f"monotone={monotone} raw_drop={devs['monotonicity']:.2e} unit_exact={unit_exact} "
        f"adjoint={devs['adjoint_symmetry']:.2e}",
    )


def test_criterion_10_determinism(verdict):
    first = json.dumps(run_all(SEED), sort_keys=True)
    second = json.dumps(run_all(SEED), sort_keys=True)
    ok = first == second and json.loads(first)["passed"]
    verdict(10, ok, f"bytes={len(first)} identical={first == second}")
