#!/usr/bin/env python3
"""Run the full verification battery over a roster of standard models.

Prints one block per model with the same summary lines the command line
tool emits, then a final tally.  Exits nonzero if anything fails, so this
doubles as a slow smoke test:

    python3 scripts/verify_models.py --depth 1200
"""

import argparse
import sys

from hardy_lab.cli import main as cli_main


def roster(depth):
    yield f"tree:2:{depth}", "0"
    yield f"tree:3:{depth}", "0"
    yield f"tree:3:{depth}", "1/3"
    yield f"tree:4:{depth}", "0"
    yield f"antitree:poly:1:{depth}", "0"
    yield f"antitree:poly:2:{depth}", "0"


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--depth", type=int, default=1200)
    parser.add_argument("--suite", default="all")
    args = parser.parse_args(argv)

    worst = 0
    for spec, gamma in roster(args.depth):
        print(f"== {spec} gamma={gamma}")
        code = cli_main([
            "verify", "--model", spec, "--gamma", gamma,
            "--suite", args.suite,
        ])
        print(f"   exit {code}")
        worst = max(worst, 0 if code == 3 else code)
    print(f"overall exit {worst}")
    return worst


if __name__ == "__main__":
    sys.exit(main())
