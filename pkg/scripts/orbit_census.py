"""Count GL2(Z)-orbits on the rational points of order q and compare with the gcd invariant.

The orbit of (a/q, b/q) under GL2(Z) is determined by gcd(a, b, q); this
prints the orbit sizes for q up to a bound and checks that claim.
"""

from __future__ import annotations

import argparse
from collections import Counter
from math import gcd

from qhm.classify import orbit_partition


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--qmax", type=int, default=12)
    args = ap.parse_args()
    for q in range(1, args.qmax + 1):
        lab = orbit_partition(q)
        sizes = Counter(lab.values())
        by_gcd = {}
        for (a, b), orbit in lab.items():
            by_gcd.setdefault(gcd(a, b, q), set()).add(orbit)
        consistent = all(len(v) == 1 for v in by_gcd.values()) and len(by_gcd) == len(sizes)
        print(f"q={q:>3} orbits={len(sizes):>2} sizes={sorted(sizes.values())} gcd_invariant_ok={consistent}")


if __name__ == "__main__":
    main()
