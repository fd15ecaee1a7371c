from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from qhm.harness import STANDARD_PARAMS, make_rng
from qhm.scalar import ExactScalar, Params

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

SQUAREFREE = (2, 3, 5, 6, 7, 10, 11, 13)

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=30)
unit_fractions = st.fractions(min_value=0, max_value=1, max_denominator=24).filter(lambda f: f < 1)


@st.composite
def scalars(draw, d=None):
    """Elements of Q(sqrt d); d drawn when not given."""
    d = draw(st.sampled_from(SQUAREFREE)) if d is None else d
    return ExactScalar(draw(fractions), draw(fractions), d)


@st.composite
def params_st(draw, irrational=None):
    c = draw(st.integers(1, 3))
    if irrational is None:
        irrational = draw(st.booleans())
    if irrational:
        d = draw(st.sampled_from((2, 5)))
        mu = ExactScalar(draw(fractions), draw(fractions.filter(bool)), d)
        nu = ExactScalar(draw(fractions), draw(fractions), d)
        return Params(c, mu, nu)
    return Params(c, draw(unit_fractions), draw(unit_fractions))


@pytest.fixture(params=range(len(STANDARD_PARAMS)), ids=["q14_16", "q13_15", "sqrt2", "sqrt5"])
def prm(request) -> Params:
    return STANDARD_PARAMS[request.param]


@pytest.fixture
def rng() -> np.random.Generator:
    return make_rng(1234)


def frac(s: str) -> Fraction:
    return Fraction(s)
