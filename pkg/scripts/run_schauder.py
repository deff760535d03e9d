"""Schauder ratios over seeded Stokes problems with smooth, wall-compatible solutions."""
import argparse
import sys

import numpy as np

from ns_apriori.estimate_verify import relative_change, schauder_family
from ns_apriori.function_spaces import Grid


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--grids", default="17,33")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    fams = []
    for n in map(int, args.grids.split(",")):
        fam = schauder_family(Grid(n), args.count, args.seed)
        r = np.array(fam.ratios)
        print(f"n={n:<3} C_s = {fam.c_schauder:.4f}  median {np.median(r):.4f}  min {r.min():.4f}")
        fams.append(fam)
    if len(fams) > 1:
        print(f"C_s change {relative_change(fams[0].c_schauder, fams[-1].c_schauder):.2%}")


if __name__ == "__main__":
    sys.exit(main())
