"""The ``qhm`` command: JSON reports on stdout, a short summary on stderr.

Exit codes: 0 success, 1 a verification exceeded its tolerance, 2 bad usage
or malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .classify import brute_force_orbit_rational, decide_isomorphism, gcd_invariant, orbit_cells
from .crossed import CrossedElement
from .dsl import DslError
from .element import QhmElement, seam_defects, seam_flags
from .harness import SUITES, make_rng, run_all
from .io import InputError, parse_element, parse_measure
from .norms import nested_specs, norm_lower_bound
from .scalar import FieldMismatchError, Params, ScalarParseError, parse_scalar
from .traces import HaarMeasure, NonInvariantMeasureError, invariance_defect, trace, trace_range

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(payload, out) -> None:
    out.write(json.dumps(payload, sort_keys=True) + "\n")


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


def _scalar(text: str, d: int):
    return parse_scalar(text, d or None)


def _params(args, suffix: str = "") -> Params:
    mu = getattr(args, "mu" + suffix)
    nu = getattr(args, "nu" + suffix)
    c = getattr(args, "c" + suffix, None) or args.c
    if mu is None or nu is None:
        raise UsageError(f"--mu{suffix} and --nu{suffix} are required")
    return Params(c, _scalar(mu, args.d), _scalar(nu, args.d), args.d)


# commands


def cmd_classify(args) -> tuple[dict, int]:
    p1 = _params(args)
    p2 = _params(args, "2")
    verdict = decide_isomorphism(p1, p2)
    out = verdict.to_json()
    out.update({"params": [p1.to_json(), p2.to_json()], "tolerance": 0, "samples": 0})
    _say(f"{verdict.kind}: {verdict.justification}")
    return out, EXIT_OK


def cmd_trace_range(args) -> tuple[dict, int]:
    prm = Params(args.c, _scalar(args.mu, args.d), _scalar(args.nu, args.d), args.d)
    G = trace_range(prm)
    _say(f"Z + 2mu Z + 2nu Z = {G}")
    return G.to_json(), EXIT_OK


def cmd_trace(args) -> tuple[dict, int]:
    el = parse_element(args.element)
    if not isinstance(el, QhmElement):
        raise UsageError("trace needs a covariant element")
    m = parse_measure(args.measure, el.params.d)
    if args.N is not None and isinstance(m, HaarMeasure):
        m = HaarMeasure(args.N, m.rule)
    try:
        value = trace(el, m)
    except NonInvariantMeasureError as exc:
        out = {"error": "measure is not lambda-invariant", "invariance_defect": str(exc.defect)}
        _say(out["error"])
        return out, EXIT_FAIL
    out = {
        "trace": [value.real, value.imag],
        "invariance_defect": str(invariance_defect(m, el.params)),
        "seam_continuous": {str(p): ok for p, ok in seam_flags(el).items()},
        "seam_defect": {str(p): v for p, v in seam_defects(el).items()},
        "samples": m.N**2 if isinstance(m, HaarMeasure) else len(m.points),
        "tolerance": 0,
    }
    _say(f"tau = {value.real:.15g} {value.imag:+.3g}i")
    return out, EXIT_OK


def cmd_verify(args) -> tuple[dict, int]:
    if args.suite == "all":
        report = run_all(args.seed)
        _say(f"{sum(r['passed'] for r in report['reports'])}/{len(report['reports'])} checks passed")
        return report, EXIT_OK if report["passed"] else EXIT_FAIL
    prm = _params(args)
    rng = make_rng(args.seed, list(SUITES).index(args.suite))
    kw = {}
    if args.samples is not None:
        if args.suite == "tracial":
            raise UsageError("tracial uses --N, not --samples")
        key = "elements" if args.suite == "norms" else "samples"
        kw[key] = args.samples
    if args.N is not None:
        if args.suite != "tracial":
            raise UsageError("--N only applies to the tracial suite")
        kw["N"] = args.N
    rep = SUITES[args.suite](prm, rng, **kw)
    out = rep.to_json()
    out["seed"] = args.seed
    worst = max(rep.deviations, key=lambda k: rep.deviations[k] / rep.limit(k) if rep.limit(k) else float("inf"))
    _say(f"{args.suite}: {'pass' if rep.passed else 'FAIL'} (worst {worst} = {rep.deviations[worst]:.3g})")
    return out, EXIT_OK if rep.passed else EXIT_FAIL


def cmd_norm(args) -> tuple[dict, int]:
    el = parse_element(args.element)
    if isinstance(el, CrossedElement):
        raise UsageError("norm needs a covariant element")
    sizes = [int(v) for v in args.grid.split(",")]
    cutoffs = [int(v) for v in args.cutoff.split(",")]
    if len(cutoffs) == 1:
        cutoffs = cutoffs * len(sizes)
    if len(sizes) != len(cutoffs):
        raise UsageError("--grid and --cutoff need the same number of entries")
    if sizes != sorted(sizes) or cutoffs != sorted(cutoffs):
        raise UsageError("truncations must grow")
    specs = nested_specs(make_rng(args.seed), sizes, cutoffs)
    bounds = norm_lower_bound(el, specs)
    rows = [{"grid": g, "cutoff": P, "bound": b} for g, P, b in zip(sizes, cutoffs, bounds)]
    _say(f"norm >= {bounds[-1]:.12g}")
    return rows, EXIT_OK


def cmd_orbit_oracle(args) -> tuple[dict, int]:
    q = args.q
    pt = (Fraction(args.mu), Fraction(args.nu))
    if q < 1 or any((v * q).denominator != 1 for v in pt):
        raise UsageError(f"point does not have denominator dividing {q}")
    cell = (int(pt[0] * q) % q, int(pt[1] * q) % q)
    orbit = orbit_cells(q, cell)
    out = {"q": q, "orbit_size": len(orbit), "gcd_invariant": gcd_invariant(q, *cell), "samples": q * q, "tolerance": 0}
    if args.mu2 is not None:
        pt2 = (Fraction(args.mu2), Fraction(args.nu2 or "0"))
        out["same_orbit"] = brute_force_orbit_rational(q, pt, pt2)
    _say(f"orbit of {cell} in (Z/{q})^2 has {len(orbit)} points")
    return out, EXIT_OK


# parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qhm", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def params_opts(p):
        p.add_argument("--c", type=int, default=1)
        p.add_argument("--d", type=int, default=0, help="squarefree d for sqrt(d) parameters")
        p.add_argument("--mu", required=True)
        p.add_argument("--nu", required=True)

    p = sub.add_parser("classify", help="decide isomorphism of two parameter sets")
    params_opts(p)
    p.add_argument("--c2", type=int)
    p.add_argument("--mu2", required=True)
    p.add_argument("--nu2", required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("trace-range", help="canonical form of Z + 2mu Z + 2nu Z")
    params_opts(p)
    p.set_defaults(func=cmd_trace_range)

    p = sub.add_parser("trace", help="trace of an element file against a measure")
    p.add_argument("--element", required=True)
    p.add_argument("--measure", default="haar", help="measure JSON file or 'haar'")
    p.add_argument("--N", type=int)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("verify", help="run a seeded verification suite")
    p.add_argument("suite", choices=[*SUITES, "all"])
    p.add_argument("--c", type=int, default=1)
    p.add_argument("--d", type=int, default=0)
    p.add_argument("--mu")
    p.add_argument("--nu")
    p.add_argument("--samples", type=int)
    p.add_argument("--N", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("norm", help="norm lower bounds along nested truncations")
    p.add_argument("--element", required=True)
    p.add_argument("--grid", default="4,16,64", help="comma-separated grid sizes")
    p.add_argument("--cutoff", default="4,8,12", help="comma-separated cutoffs P")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("orbit-oracle", help="exhaustive GL2(Z)-orbit of a point of order dividing q")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--mu", required=True)
    p.add_argument("--nu", required=True)
    p.add_argument("--mu2")
    p.add_argument("--nu2")
    p.set_defaults(func=cmd_orbit_oracle)
    return ap


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        payload, code = args.func(args)
    except (UsageError, InputError, DslError, ScalarParseError, FieldMismatchError, ValueError, OSError) as exc:
        _say(f"qhm {args.command}: {exc}")
        _emit({"error": str(exc)}, out)
        return EXIT_USAGE
    _emit(payload, out)
    return code


def main(argv=None) -> None:
    sys.exit(run(argv))
