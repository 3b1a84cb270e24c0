#!/usr/bin/env python3
"""Tabulate the optimal weight against the Green-function weight on a tree.

Shows how the margin w0 - w_green stays positive while shrinking like
sqrt(d)/(4 r**2), which is the quantitative sense in which the optimal
weight wins:

    python3 scripts/weight_vs_green_table.py --d 2 --r-max 64
"""

import argparse
import math
import sys

from hardy_lab import compare_to_green, make_tree


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--d", type=int, default=2, help="tree branching number")
    parser.add_argument("--r-max", type=int, default=64)
    args = parser.parse_args(argv)
    if args.d < 2:
        parser.error("the Green comparison needs a transient tree, d >= 2")

    model = make_tree(args.d, args.r_max + 2)
    cmp_ = compare_to_green(model, args.r_max)
    print(f"{'r':>5} {'w0':>18} {'w_green':>18} {'margin':>13} {'margin*4r^2/sqrt(d)':>20}")
    r = 1
    while r <= args.r_max:
        margin = cmp_.margins[r]
        scaled = margin * 4.0 * r * r / math.sqrt(args.d)
        print(f"{r:>5} {cmp_.w_optimal[r]:>18.12f} {cmp_.w_green[r]:>18.12f}"
              f" {margin:>13.6e} {scaled:>20.12f}")
        r *= 2
    print(cmp_.report.summary_line())
    return 0 if cmp_.report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
