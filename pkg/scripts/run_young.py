"""Fitted Young exponents across alpha, next to both candidate closed forms."""
import argparse
import sys

import numpy as np

from ns_apriori import exponents
from ns_apriori.interp_verify import young_split_check


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=20000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    print("alpha  a1        B         slope_closed  slope_search  -A_young   -A_alt   violations")
    for alpha in np.arange(1, 10) * 0.1:
        a1, a2 = exponents.a_exponents(alpha)
        rep = young_split_check(a1, a2, trials=args.trials, seed=args.seed)
        print(f"{alpha:<6.2f} {a1:.6f}  {rep.B:8.4f}  {rep.slope_closed:12.6f}  {rep.slope_search:12.6f}  "
              f"{-rep.A_young:9.4f}  {-rep.A_alt:9.4f}  {rep.violations}")


if __name__ == "__main__":
    sys.exit(main())
