"""JSON formats for elements and measures."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .crossed import CrossedElement
from .dsl import DslError, parse_expr, to_dsl
from .element import QhmElement
from .scalar import ExactScalar, Params, ScalarParseError, format_scalar, parse_scalar
from .traces import AtomicMeasure, HaarMeasure


class InputError(ValueError):
    """Malformed input file; carries a 1-based line and column when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


def _read(source) -> str:
    if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        return Path(source).read_text()
    return source


def _load(text: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(data, dict):
        raise InputError("top level must be a JSON object", 1, 1)
    return data


def _locate(text: str, needle: str, start: int) -> tuple[int, int, int]:
    """Line and column of the first character inside the JSON string ``needle``."""
    pos = text.find(json.dumps(needle), start)
    if pos < 0:
        pos = text.find(needle, start)
        body = pos
    else:
        body = pos + 1
    if pos < 0:
        return 1, 1, start
    line = text.count("\n", 0, body) + 1
    col = body - (text.rfind("\n", 0, body) + 1) + 1
    return line, col, pos + 1


def _scalar(value, d: int | None, what: str) -> ExactScalar:
    try:
        return parse_scalar(str(value), d or None)
    except (ScalarParseError, ValueError) as exc:
        raise InputError(f"{what}: {exc}") from None


def _params(data: dict) -> Params:
    for key in ("c", "mu", "nu"):
        if key not in data:
            raise InputError(f"missing field {key!r}")
    d = int(data.get("d", 0))
    mu = _scalar(data["mu"], d, "mu")
    nu = _scalar(data["nu"], d, "nu")
    try:
        return Params(int(data["c"]), mu, nu, d)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _components(text: str, data: dict, d: int) -> dict:
    comps = data.get("components")
    if not isinstance(comps, list):
        raise InputError("'components' must be a list")
    out: dict = {}
    cursor = 0
    for item in comps:
        if not isinstance(item, dict) or "p" not in item or "expr" not in item:
            raise InputError("each component needs 'p' and 'expr'")
        p = item["p"]
        if not isinstance(p, int) or isinstance(p, bool):
            raise InputError(f"component index {p!r} is not an integer")
        src = str(item["expr"])
        line, col, cursor = _locate(text, src, cursor)
        if p in out:
            raise InputError(f"component p={p} appears twice", line, col)
        try:
            out[p] = parse_expr(src, d or None)
        except DslError as exc:
            raise InputError(f"p={p}: {exc.message}", line, col + exc.column - 1) from None
    return out


def parse_element(source) -> QhmElement | CrossedElement:
    """Element from a path or JSON text.  ``"space": "torus"`` selects a crossed-product element."""
    text = _read(source)
    data = _load(text)
    params = _params(data)
    comps = _components(text, data, params.d)
    space = data.get("space", "covariant")
    if space == "torus":
        return CrossedElement(params, comps)
    if space != "covariant":
        raise InputError(f"unknown space {space!r}")
    return QhmElement(params, comps)


def element_to_json(el: QhmElement | CrossedElement) -> dict:
    out = el.params.to_json()
    out["components"] = [{"p": p, "expr": to_dsl(f)} for p, f in el.components.items()]
    if isinstance(el, CrossedElement):
        out["space"] = "torus"
    return out


def parse_measure(source, d: int | None = None):
    if isinstance(source, str) and source.strip() == "haar":
        return HaarMeasure()
    data = _load(_read(source))
    kind = data.get("type")
    if kind == "haar":
        return HaarMeasure(int(data.get("N", 512)), data.get("rule", "midpoint"))
    if kind == "atomic":
        pts = data.get("points", [])
        ws = data.get("weights", [])
        if any(not isinstance(pt, list) or len(pt) != 2 for pt in pts):
            raise InputError("atomic points must be [x, y] pairs")
        points = tuple((_scalar(x, d, "x"), _scalar(y, d, "y")) for x, y in pts)
        try:
            weights = tuple(Fraction(str(w)) for w in ws)
            return AtomicMeasure(points, weights)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    raise InputError(f"unknown measure type {kind!r}")


def measure_to_json(m) -> dict:
    if isinstance(m, HaarMeasure):
        out = {"type": "haar", "N": m.N}
        if m.rule != "midpoint":
            out["rule"] = m.rule
        return out
    if isinstance(m, AtomicMeasure):
        return {
            "type": "atomic",
            "points": [[format_scalar(x), format_scalar(y)] for x, y in m.points],
            "weights": [str(w) for w in m.weights],
        }
    raise TypeError(f"no JSON form for {type(m).__name__}")
