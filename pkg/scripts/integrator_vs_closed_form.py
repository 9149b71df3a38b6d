"""Error and cost of the path integrator against the closed form, per tolerance."""

import argparse
import time

import numpy as np

from stholo import SolutionParams
from stholo.closed_form import eval_v
from stholo.core import inv_v
from stholo.quadrature import OdeProblem, integrate_path


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    law, params = inv_v(), SolutionParams(0j)
    print(f"{'rel_tol':>8} {'max err':>10} {'mean steps':>10} {'time s':>7}")
    for rel_tol in (1e-4, 1e-6, 1e-8, 1e-10, 1e-12):
        rng = np.random.default_rng(args.seed)
        worst, steps, start = 0.0, 0, time.perf_counter()
        for _ in range(args.trials):
            n = int(rng.integers(3, 7))
            path = tuple(complex(rng.uniform(-2, 2), rng.uniform(0.2, 3)) for _ in range(n))
            traj = integrate_path(OdeProblem(law, 0j, eval_v(path[0], params)[0], path), rel_tol=rel_tol,
                                  abs_tol=min(1e-12, rel_tol))
            worst = max(worst, abs(traj.v_end - eval_v(path[-1], params)[0]))
            steps += traj.accepted
        print(f"{rel_tol:8.0e} {worst:10.2e} {steps / args.trials:10.1f} {time.perf_counter() - start:7.2f}")


if __name__ == "__main__":
    main()
