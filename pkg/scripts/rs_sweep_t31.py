#!/usr/bin/env python3
"""Sweep the explicit height-3 family and write its gap vectors as CSV.

The output traces the one-parameter curve of realizable relative spacings
inside the 6-simplex; convex combinations of two sweep points violate the
cubic constraint, which scripts/check output demonstrates at the midpoint.

Usage: python scripts/rs_sweep_t31.py [--steps 50] [--out rs_points.csv]
"""

import argparse
import csv
import sys
from fractions import Fraction

from hedge_iep.pth import t31_constraints_check, t31_exact_spectrum
from hedge_iep.spectra import gap_vector
from hedge_iep.trees import profile, smallest_lush_hedge


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--steps", type=int, default=50)
    ap.add_argument("--out", default="rs_points.csv")
    args = ap.parse_args()
    prof = profile(smallest_lush_hedge(3))
    lo, hi = Fraction(1, 3), Fraction(273, 500)
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x"] + [f"gap{i}" for i in range(1, 8)])
        for k in range(1, args.steps + 1):
            x = lo + (hi - lo) * Fraction(k, args.steps + 1)
            spec = t31_exact_spectrum(x, prof)
            assert all(t31_constraints_check(spec.values).values())
            writer.writerow([str(x)] + [str(g) for g in gap_vector(spec).p])
    s1 = t31_exact_spectrum(Fraction(2, 5), prof).values
    s2 = t31_exact_spectrum(Fraction(1, 2), prof).values
    mid = tuple((a + b) / 2 for a, b in zip(s1, s2))
    res = t31_constraints_check(mid)
    print(f"wrote {args.out}")
    print(f"midpoint of x=2/5 and x=1/2 keeps linear constraints: {res['linear'] and res['trace']}")
    print(f"midpoint satisfies the cubic: {res['cubic']} (expected False: the curve is not convex)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
