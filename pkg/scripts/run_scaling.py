"""Scaling-balance slopes for the dilated bump, both profiles, several grids."""
import argparse
import sys

from ns_apriori.function_spaces import Grid
from ns_apriori.interp_verify import PROFILES, scaling_balance_test


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--grids", default="33,65")
    ap.add_argument("--alpha", type=float, default=0.5)
    ap.add_argument("--q", type=float, default=6.0)
    args = ap.parse_args(argv)

    print("profile  n    l   omega    s_lhs    s_rhs    gap")
    for profile in PROFILES:
        for n in map(int, args.grids.split(",")):
            for l in (0.0, 1.0):
                fit = scaling_balance_test((1, 2, 4, 8), l=l, q=args.q, alpha=args.alpha, grid=Grid(n),
                                           profile=profile)
                print(f"{profile:<8} {n:<4} {l:<3g} {fit.omega:.4f}  {fit.s_lhs:7.4f}  {fit.s_rhs:7.4f}  {fit.gap:.4f}")


if __name__ == "__main__":
    sys.exit(main())
