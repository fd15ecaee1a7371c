from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qhm.lattice import content, hnf, solve_membership

from oracles import hnf2

vec2 = st.tuples(st.integers(-60, 60), st.integers(-60, 60))


@pytest.mark.parametrize(
    "rows, expected",
    [
        ([[1, 0], [0, 1]], [[1, 0], [0, 1]]),
        ([[3, 0], [0, 3], [2, 0]], [[1, 0], [0, 3]]),
        ([[2, 4]], [[2, 4]]),
        ([[6], [3], [2]], [[1]]),
        ([[2, 1], [0, 2]], [[2, 1], [0, 2]]),
        ([[0, 0], [0, 0]], []),
        ([[-4, 6]], [[4, -6]]),
    ],
)
def test_hnf_examples(rows, expected):
    assert hnf(rows) == expected


@given(st.lists(vec2, min_size=1, max_size=4))
def test_hnf_matches_determinant_oracle(vs):
    assert hnf([list(v) for v in vs]) == hnf2(list(vs))


@given(st.lists(vec2, min_size=1, max_size=4), st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_hnf_spans_the_same_lattice(vs, coeffs):
    H = hnf([list(v) for v in vs])
    for v in vs:
        assert solve_membership(H, v)
    combo = [sum(c * v[i] for c, v in zip(coeffs, vs)) for i in range(2)]
    assert solve_membership(H, combo)
    # HNF rows are themselves combinations of the inputs
    assert hnf([list(r) for r in H] + [list(v) for v in vs]) == H


@given(st.lists(vec2, min_size=1, max_size=4))
def test_hnf_is_idempotent_and_order_free(vs):
    H = hnf([list(v) for v in vs])
    assert hnf(H) == H
    assert hnf([list(v) for v in reversed(vs)]) == H


def test_membership_negative():
    assert not solve_membership([[1, 0], [0, 3]], [0, 1])
    assert not solve_membership([[2]], [3])


def test_content():
    assert content([6, -4, 10]) == 2
    assert content([]) == 0


def test_ragged_rows_rejected():
    with pytest.raises(ValueError):
        hnf([[1, 2], [3]])
