"""Hypothesis strategies for expression trees."""

from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from qhm import expr as E
from qhm.scalar import ExactScalar

small = st.fractions(min_value=-3, max_value=3, max_denominator=6)
unit_interval = st.fractions(min_value=0, max_value=1, max_denominator=12)
surd_shift = st.builds(lambda a, b: ExactScalar(a, b, 2), small, small)


def _linear(cls):
    return st.builds(cls, st.integers(-3, 3).map(Fraction), st.integers(-2, 2).map(Fraction), small)


@st.composite
def _chi(draw):
    a, b = sorted((draw(unit_interval), draw(unit_interval)))
    return E.Chi(a, b)


leaves = st.one_of(
    st.builds(lambda r, i: E.Const(r, i), small, small),
    st.sampled_from([E.Var("x"), E.Var("y")]),
    _linear(E.Exp),
    _linear(E.SinPi),
    _linear(E.CosPi),
    _chi(),
    st.builds(E.FloorPhase, st.integers(-3, 3), small, st.sampled_from([Fraction(0), Fraction(-1, 3), Fraction(1, 2)])),
)


def _extend(children):
    return st.one_of(
        st.builds(lambda c: E.Abs(c), children),
        st.builds(lambda c: E.Conj(c), children),
        st.builds(lambda c: E.Wrap(c), children),
        st.builds(lambda a, b: E.Sum((a, b)), children, children),
        st.builds(lambda a, b: E.Prod((a, b)), children, children),
        st.builds(lambda u, v, c: E.Translate(u, v, c), small, small, children),
    )


trees = st.recursive(leaves, _extend, max_leaves=8)

# rational points in [0, 1)^2 with small denominators
points = st.tuples(
    st.fractions(min_value=0, max_value=1, max_denominator=50).filter(lambda f: f < 1),
    st.fractions(min_value=0, max_value=1, max_denominator=50).filter(lambda f: f < 1),
)
