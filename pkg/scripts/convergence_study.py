"""Residuals of the closed-form solution versus finite-difference step h.

Prints max CR, mass and momentum residuals over a grid for a sweep of h and
the observed log-log slopes between consecutive steps.
"""

import argparse
import math

from stholo import SolutionParams
from stholo.cli import parse_complex
from stholo.core import inv_v
from stholo.sampler import GridSpec
from stholo.verifier import verify_grid


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--C", default="0,1")
    ap.add_argument("--grid", default="0.5:2:20,-3:3:20")
    ap.add_argument("--steps", default="1e-1,3e-2,1e-2,3e-3,1e-3,3e-4,1e-4,3e-5,1e-5")
    args = ap.parse_args()

    params, grid, law = SolutionParams(parse_complex(args.C)), GridSpec.parse(args.grid), inv_v()
    hs = [float(h) for h in args.steps.split(",")]
    rows = []
    for h in hs:
        _, s = verify_grid(params, law, grid, h)
        rows.append((h, s.max_r_cr, s.max_r_mass, s.max_r_momentum))
    print(f"{'h':>8} {'r_cr':>10} {'r_mass':>10} {'r_mom':>10}  slope(mass)")
    for i, (h, a, b, c) in enumerate(rows):
        slope = "" if i == 0 else f"{math.log(rows[i - 1][2] / b) / math.log(rows[i - 1][0] / h):.2f}"
        print(f"{h:8.0e} {a:10.2e} {b:10.2e} {c:10.2e}  {slope}")


if __name__ == "__main__":
    main()
