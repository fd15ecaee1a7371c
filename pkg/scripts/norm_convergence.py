"""Norm lower bounds along refining truncations for a few elements.

For Delta_1 delta_1 the bounds climb toward sup |Delta_1| = 1; for a random
element they settle at a value the finite sections cannot exceed.
"""

from __future__ import annotations

import argparse

from qhm import expr as E
from qhm.element import delta, unit
from qhm.harness import STANDARD_PARAMS, make_rng, random_element
from qhm.norms import nested_specs, norm_lower_bound


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--params", type=int, default=2, help="index into the standard parameter sets")
    args = ap.parse_args()
    prm = STANDARD_PARAMS[args.params]
    sizes, cutoffs = (2, 8, 32, 128, 512), (3, 4, 6, 10, 16)
    rng = make_rng(args.seed)
    specs = nested_specs(rng, sizes, cutoffs)
    elements = {
        "unit": unit(prm),
        "Delta_1 delta_1": delta(prm, 1, E.Abs(E.SinPi(1, 0, 0))),
        "random": random_element(rng, prm),
    }
    print(f"params c={prm.c} mu={prm.mu} nu={prm.nu}")
    print(f"{'element':<18}" + "".join(f"{f'G={g},P={P}':>16}" for g, P in zip(sizes, cutoffs)))
    for name, el in elements.items():
        bounds = norm_lower_bound(el, specs)
        print(f"{name:<18}" + "".join(f"{b:>16.12f}" for b in bounds))


if __name__ == "__main__":
    main()
