#!/usr/bin/env python3
"""Step-halving study of the continuum harmonicity residuals.

For each built-in space and both singular profiles, prints the residual at
a ladder of finite-difference steps together with the ratio to the previous
step.  Clean second-order stencils show ratios near 4 until roundoff takes
over:

    python3 scripts/continuum_residuals.py --steps 4
"""

import argparse
import sys

from hardy_lab import damek_ricci_space, harmonicity_residual, hyperbolic_space


def spaces():
    yield hyperbolic_space(3)
    yield hyperbolic_space(4)
    yield damek_ricci_space(2, 1)
    yield damek_ricci_space(3, 1)
    yield damek_ricci_space(2, 2)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--steps", type=int, default=4,
                        help="number of halvings starting from 1e-3")
    parser.add_argument("--r-min", type=float, default=0.5)
    parser.add_argument("--r-max", type=float, default=5.0)
    args = parser.parse_args(argv)

    for space in spaces():
        for which in ("sqrt-u", "sqrt-u-log"):
            print(f"== {space.label}  profile={which}")
            h = 1e-3
            previous = None
            for _ in range(args.steps):
                res = harmonicity_residual(
                    space, args.r_min, args.r_max, h, which=which
                )
                ratio = "" if previous is None else f"  ratio {previous / res:6.3f}"
                print(f"   h={h:9.2e}  residual {res:12.5e}{ratio}")
                previous, h = res, h / 2.0
    return 0


if __name__ == "__main__":
    sys.exit(main())
