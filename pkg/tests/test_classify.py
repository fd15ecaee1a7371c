from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qhm.classify import (
    GL2Z,
    IDENTITY,
    ISOMORPHIC,
    NOT_ISOMORPHIC,
    R,
    RATIONAL_ORBIT_ONLY,
    S,
    T,
    FieldMismatch,
    apply_gl2z,
    apply_to_params,
    brute_force_orbit_rational,
    decide_isomorphism,
    group_equal,
    orbit_partition,
    rational_same_orbit,
    word,
)
from qhm.scalar import ExactScalar, Params, parse_scalar
from qhm.traces import trace_range

from conftest import params_st
from oracles import bfs_orbit

words = st.text(alphabet="STR", max_size=12)


def test_gl2z_validation_and_words():
    with pytest.raises(ValueError):
        GL2Z(2, 0, 0, 1)
    assert word("") == IDENTITY
    assert word("SS") == GL2Z(-1, 0, 0, -1)
    assert word("SSSS") == IDENTITY
    assert word("RR") == IDENTITY
    assert word("ST") == S @ T


def test_apply_is_linear_mod_one():
    mu, nu = parse_scalar("1/2*sqrt(2)"), ExactScalar(Fraction(1, 3))
    m2, n2 = apply_gl2z(T, mu, nu)
    assert m2 == (mu + nu).floor_mod1()[1] and n2 == nu
    m3, n3 = apply_gl2z(S, mu, nu)
    assert (m3, n3) == ((-nu).floor_mod1()[1], mu)


@given(words, words, params_st(irrational=True))
def test_action_is_a_group_action(w1, w2, prm):
    g, h = word(w1), word(w2)
    once = apply_gl2z(g @ h, prm.mu, prm.nu)
    twice = apply_gl2z(g, *apply_gl2z(h, prm.mu, prm.nu))
    assert once == twice


def test_spec_example_isomorphic():
    p1 = Params(1, parse_scalar("1/2*sqrt(2)"), parse_scalar("1/3"))
    p2 = Params(1, parse_scalar("1/2*sqrt(2)"), parse_scalar("2/3"))
    v = decide_isomorphism(p1, p2)
    assert v.kind == ISOMORPHIC
    assert "D=3" in v.justification and "[[1, 0], [0, 3]]" in v.justification


@settings(max_examples=200)
@given(words, params_st(irrational=True))
def test_orbit_images_are_isomorphic(w, prm):
    image = apply_to_params(word(w), prm)
    assert decide_isomorphism(prm, image).kind == ISOMORPHIC


def test_different_groups_not_isomorphic():
    p1 = Params(1, parse_scalar("1/2*sqrt(2)"), Fraction(1, 3))
    p2 = Params(1, parse_scalar("1/2*sqrt(2)"), Fraction(1, 5))
    v = decide_isomorphism(p1, p2)
    assert v.kind == NOT_ISOMORPHIC
    assert v.groups[0] != v.groups[1]


def test_c_mismatch_is_k_theory_obstruction():
    p1 = Params(1, parse_scalar("1/2*sqrt(2)"), Fraction(1, 3))
    p2 = Params(2, p1.mu, p1.nu)
    v = decide_isomorphism(p1, p2)
    assert v.kind == NOT_ISOMORPHIC
    assert "K0" in v.justification and "Z_1" in v.justification and "Z_2" in v.justification


def test_field_mismatch_detected():
    G1 = trace_range(Params(1, parse_scalar("1/2*sqrt(2)"), 0))
    G2 = trace_range(Params(1, parse_scalar("1/2*sqrt(3)"), 0))
    with pytest.raises(FieldMismatch):
        group_equal(G1, G2)


def test_mixed_rational_and_irrational():
    p1 = Params(1, parse_scalar("1/2*sqrt(2)"), Fraction(1, 3))
    p2 = Params(1, Fraction(1, 4), Fraction(1, 6))
    assert decide_isomorphism(p1, p2).kind == NOT_ISOMORPHIC


def test_rational_case_reports_orbit_only():
    p1 = Params(1, Fraction(1, 4), Fraction(1, 6))
    p2 = Params(1, Fraction(1, 12), 0)
    v = decide_isomorphism(p1, p2)
    assert v.kind == RATIONAL_ORBIT_ONLY and v.same_orbit is True
    v2 = decide_isomorphism(p1, Params(1, Fraction(1, 2), 0))
    assert v2.kind == RATIONAL_ORBIT_ONLY and v2.same_orbit is False


@pytest.mark.parametrize("q", range(1, 13))
def test_rational_orbits_match_bfs_oracle(q):
    labels = {}
    for a in range(q):
        for b in range(q):
            if (a, b) not in labels:
                for cell in bfs_orbit(q, (a, b)):
                    labels[cell] = (a, b)
    params = {
        (a, b): Params(1, Fraction(a, q), Fraction(b, q)) for a in range(q) for b in range(q)
    }
    for c1, p1 in params.items():
        for c2, p2 in params.items():
            assert rational_same_orbit(p1, p2) == (labels[c1] == labels[c2])


@pytest.mark.parametrize("q", [1, 4, 6, 12])
def test_library_orbit_partition_matches_oracle(q):
    lab = orbit_partition(q)
    for a in range(q):
        for b in range(q):
            orbit = bfs_orbit(q, (a, b))
            assert {c for c in lab if lab[c] == lab[(a, b)]} == orbit


def test_brute_force_orbit_interface():
    assert brute_force_orbit_rational(12, (Fraction(1, 4), Fraction(1, 6)), (Fraction(1, 12), 0))
    assert not brute_force_orbit_rational(4, (Fraction(1, 2), 0), (Fraction(1, 4), 0))
    with pytest.raises(ValueError):
        brute_force_orbit_rational(4, (Fraction(1, 3), 0), (0, 0))


def test_verdict_json():
    p = Params(1, parse_scalar("1/2*sqrt(2)"), Fraction(1, 3))
    out = decide_isomorphism(p, p).to_json()
    assert out["verdict"] == ISOMORPHIC and len(out["groups"]) == 2
    assert R.det == -1
