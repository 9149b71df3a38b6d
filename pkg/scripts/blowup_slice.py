"""Track |v| along a time slice through the first blow-up and past it.

    python3 scripts/blowup_slice.py --C=0,-1 --x 1.5707963267948966
"""

import argparse
import math

from stholo import SolutionParams, classify_regime
from stholo.cli import parse_complex
from stholo.sampler import time_slice


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--C", default="0,-1")
    ap.add_argument("--x", type=float, default=math.pi / 2)
    ap.add_argument("--t-max", type=float, default=2.0)
    ap.add_argument("--n", type=int, default=41)
    args = ap.parse_args()

    params = SolutionParams(parse_complex(args.C))
    regime = classify_regime(params)
    print(f"regime {regime.tag.value}, first blow-up time {regime.first_blowup_time}")
    ts = [args.t_max * k / (args.n - 1) for k in range(args.n)]
    print(f"{'t':>8} {'|v|':>12}  status")
    for s in time_slice(params, args.x, ts):
        mag = "inf" if s.v is None else f"{abs(s.v):.6g}"
        print(f"{s.t:8.4f} {mag:>12}  {s.status.value}")


if __name__ == "__main__":
    main()
