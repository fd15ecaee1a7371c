"""Quantum Heisenberg manifolds made executable.

Exact scalars in Q(sqrt d), covariant elements with twisted convolution, the
cocycle embedding into a crossed product over the torus, traces from invariant
measures, trace-range classification and truncated-representation norms.
"""

from __future__ import annotations

from .classify import GL2Z, Verdict, apply_gl2z, decide_isomorphism, word
from .crossed import CrossedElement, embed, h_cocycle, lambda_act, sigma_act, u_cocycle
from .dsl import DslError, parse_expr, to_dsl
from .element import QhmElement, adjoint, decompose_delta, delta, extend_eval, multiply, unit
from .norms import TruncationSpec, norm_lower_bound, theta_matrix
from .scalar import ExactScalar, Params, format_scalar, parse_scalar
from .traces import (
    AtomicMeasure,
    HaarMeasure,
    TraceRangeGroup,
    delta_lambda_winding,
    strip_mass,
    trace,
    trace_range,
)

__all__ = [
    "AtomicMeasure",
    "CrossedElement",
    "DslError",
    "ExactScalar",
    "GL2Z",
    "HaarMeasure",
    "Params",
    "QhmElement",
    "TraceRangeGroup",
    "TruncationSpec",
    "Verdict",
    "adjoint",
    "apply_gl2z",
    "decide_isomorphism",
    "decompose_delta",
    "delta",
    "delta_lambda_winding",
    "embed",
    "extend_eval",
    "format_scalar",
    "h_cocycle",
    "lambda_act",
    "multiply",
    "norm_lower_bound",
    "parse_expr",
    "parse_scalar",
    "sigma_act",
    "strip_mass",
    "theta_matrix",
    "to_dsl",
    "trace",
    "trace_range",
    "u_cocycle",
    "unit",
    "word",
]
