#!/usr/bin/env python3
"""Run every self-verifying reproduction and summarize.

Usage: python scripts/run_repro.py [--seed N]
"""

import argparse
import sys

from hedge_iep.repro import REPROS, run_repro


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    failures = []
    for example_id in sorted(REPROS):
        print(f"=== {example_id} ===")
        report = run_repro(example_id, seed=args.seed)
        report.print_lines()
        if not report.passed:
            failures.append(example_id)
        print()
    if failures:
        print("FAILED:", ", ".join(failures))
        return 1
    print(f"all {len(REPROS)} reproductions passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
