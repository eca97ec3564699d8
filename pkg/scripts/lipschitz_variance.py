#!/usr/bin/env python3
"""Endpoint variance of the continuous Lipschitz model across d.

Probes how Var(f(n)) decays with the constraint radius in the real-valued
relaxation (heat-bath dynamics, many parallel replications).  The integer
model's variance scales like n * 2^-d; the conjecture for the continuous
model is a polynomial law ~ n * d^-2, so the decay here should be far slower
than a factor of two per unit of d.  Output is a CSV of point estimates with
a normal-approximation confidence interval; this is a reported experiment,
not an asserted test.

Chains start from the zero function, so --sweeps must comfortably exceed the
relaxation time (which grows like n^2 for small d) for the numbers to
reflect equilibrium.
"""

import argparse
import sys

import numpy as np

from homwalk import sampling


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=400)
    ap.add_argument("--d-values", type=int, nargs="+", default=[0, 1, 2, 3, 4, 5])
    ap.add_argument("--sweeps", type=int, default=400)
    ap.add_argument("--reps", type=int, default=400)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--all-distances", action="store_true",
                    help="use the non-bipartite variant (edges at all "
                         "distances up to d+1)")
    args = ap.parse_args()

    print("d,n,var_endpoint,ci_low,ci_high,var_over_n")
    for d in args.d_values:
        out = sampling.lipschitz_glauber_batch(
            args.n, d, args.sweeps, args.reps, args.seed + d,
            all_distances=args.all_distances)
        endpoint = out[:, -1]
        var = endpoint.var(ddof=1)
        se = var * np.sqrt(2.0 / (args.reps - 1))
        print(f"{d},{args.n},{var:.4f},{var - 2 * se:.4f},{var + 2 * se:.4f},"
              f"{var / args.n:.6f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
