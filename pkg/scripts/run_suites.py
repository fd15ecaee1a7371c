"""Run every verification suite on the standard parameter sets and write a JSON report.

    python3 scripts/run_suites.py --seed 0 --out report.json
"""

from __future__ import annotations

import argparse
import json
import sys

from qhm.harness import run_all


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--N", type=int, default=128, help="quadrature size for the tracial suite")
    ap.add_argument("--out", help="output path (default: stdout)")
    args = ap.parse_args()
    report = run_all(args.seed, N=args.N)
    text = json.dumps(report, sort_keys=True, indent=1)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    for r in report["reports"]:
        worst = max(r["max_deviation"].values())
        print(f"{r['check']:<11} {r['params']['mu']:>14} {r['params']['nu']:>12}  worst={worst:.2e}  "
              f"{'pass' if r['passed'] else 'FAIL'}", file=sys.stderr)
    return 0 if report["passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
