from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qhm import expr as E
from qhm.dsl import parse_expr
from qhm.element import (
    ParamsMismatchError,
    QhmElement,
    check_covariance,
    decompose_delta,
    delta,
    delta_functions,
    extend_eval,
    max_difference,
    seam_defects,
    seam_flags,
    unit,
)
from qhm.harness import STANDARD_PARAMS, make_rng, random_element
from qhm.scalar import Params

seeds = st.integers(0, 2**32 - 1)
param_sets = st.sampled_from(STANDARD_PARAMS)
TOL = 1e-10


def _pts(seed, n=64):
    r = make_rng(seed, 99)
    return r.uniform(0, 1, n), r.uniform(0, 1, n)


def direct_product(phi, psi, x, y, p):
    """(Phi * Psi)(m, p) = sum_q Phi(m, q) Psi(lambda_{-q} m, p - q), from the extension rule."""
    mu2, nu2 = 2 * float(phi.params.mu), 2 * float(phi.params.nu)
    out = np.zeros_like(x, dtype=complex)
    for q in phi.support:
        out += extend_eval(phi, x, y, q) * extend_eval(psi, x - q * mu2, y - q * nu2, p - q)
    return out


def direct_adjoint(phi, x, y, p):
    mu2, nu2 = 2 * float(phi.params.mu), 2 * float(phi.params.nu)
    return np.conj(extend_eval(phi, x - p * mu2, y - p * nu2, -p))


@given(param_sets, seeds)
def test_product_matches_direct_formula(prm, seed):
    rng = make_rng(seed)
    a, b = random_element(rng, prm), random_element(rng, prm)
    x, y = _pts(seed)
    ab = a * b
    for p in set(ab.support) | {0}:
        assert np.abs(extend_eval(ab, x, y, p) - direct_product(a, b, x, y, p)).max() < TOL


@given(param_sets, seeds)
def test_adjoint_matches_direct_formula(prm, seed):
    a = random_element(make_rng(seed), prm)
    x, y = _pts(seed)
    s = a.star()
    for p in range(-4, 5):
        assert np.abs(extend_eval(s, x, y, p) - direct_adjoint(a, x, y, p)).max() < TOL


@settings(max_examples=40)
@given(param_sets, seeds)
def test_star_algebra_laws(prm, seed):
    rng = make_rng(seed)
    a, b, c = (random_element(rng, prm) for _ in range(3))
    x, y = _pts(seed)
    one = unit(prm)
    assert max_difference(one * a, a, x, y) < TOL
    assert max_difference(a * one, a, x, y) < TOL
    assert max_difference(a.star().star(), a, x, y) < TOL
    assert max_difference((a * b).star(), b.star() * a.star(), x, y) < TOL
    assert max_difference((a * b) * c, a * (b * c), x, y) < TOL
    assert max_difference(a * (b + c), a * b + a * c, x, y) < TOL


@given(param_sets, seeds)
def test_support_arithmetic(prm, seed):
    rng = make_rng(seed)
    a, b = random_element(rng, prm), random_element(rng, prm)
    sums = {p + q for p in a.support for q in b.support}
    assert set((a * b).support) <= sums
    assert a.star().support == sorted(-p for p in a.support)


@given(param_sets, seeds)
def test_covariance_is_definitional(prm, seed):
    rng = make_rng(seed)
    a, b = random_element(rng, prm), random_element(rng, prm)
    x, y = _pts(seed)
    for el in (a, a * b, a.star()):
        assert check_covariance(el, [-3, -1, 1, 2, 4], x, y) <= 1e-12


def test_covariance_check_detects_corruption(prm):
    a = delta(prm, 1, parse_expr("1 + e(x)"))
    x, y = _pts(0)

    def untwisted(phi, xs, ys, p):
        f = phi.components.get(p)
        return E.evaluate(f, xs - np.floor(xs), ys) if f is not None else np.zeros_like(xs, complex)

    assert check_covariance(a, [1], x, y, evaluator=untwisted) > 1e-3


@pytest.mark.parametrize("p", range(-2, 3))
def test_partition_of_unity(prm, p):
    d1, d2 = delta_functions(prm, p)
    x, y = _pts(p + 10, 500)
    s = np.abs(E.evaluate(d1, x, y)) ** 2 + np.abs(E.evaluate(d2, x, y)) ** 2
    assert np.abs(s - 1).max() < 1e-12
    for xe in (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
        v = abs(E.evaluate(d1, xe, Fraction(1, 3))) ** 2 + abs(E.evaluate(d2, xe, Fraction(1, 3))) ** 2
        assert v == pytest.approx(1, abs=1e-15)


@pytest.mark.parametrize("p", range(-2, 3))
def test_delta_decomposition_reconstructs(prm, p):
    f = parse_expr("1 + 2e(x - y) + cospi(2x)")
    phi = delta(prm, p, f)
    a1, b1, a2, b2 = decompose_delta(phi)
    x, y = _pts(p + 20, 300)
    assert max_difference(a1 * b1 + a2 * b2, phi, x, y) < 1e-10
    assert a1.support == [0] and b1.support == [p]


def test_decompose_requires_single_component(prm):
    with pytest.raises(ValueError):
        decompose_delta(QhmElement(prm, {0: E.ONE, 1: E.ONE}))


def test_delta_functions_are_seam_continuous(prm):
    for p in range(-2, 3):
        d1, d2 = delta_functions(prm, p)
        assert all(seam_flags(delta(prm, p, d1)).values())
        assert all(seam_flags(delta(prm, p, d2)).values())


def test_seam_flags_distinguish_continuity(prm):
    smooth = delta(prm, 1, parse_expr("sinpi(x)^2 * e(y)"))
    step = delta(prm, 1, parse_expr("chi(0, 1/2)"))
    assert seam_flags(smooth) == {1: True}
    assert seam_flags(step) == {1: False}
    assert seam_defects(step)[1] == pytest.approx(1.0)


def test_unit_and_zero_components():
    prm = STANDARD_PARAMS[0]
    one = unit(prm)
    assert one.support == [0]
    assert QhmElement(prm, {3: E.ZERO}).support == []


def test_params_mismatch_rejected():
    a = unit(STANDARD_PARAMS[0])
    b = unit(Params(1, Fraction(1, 4), Fraction(1, 5)))
    with pytest.raises(ParamsMismatchError):
        a * b
