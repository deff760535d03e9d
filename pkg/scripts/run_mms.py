"""Manufactured-solution errors and observed orders, Stokes and Navier-Stokes."""
import argparse
import sys

from ns_apriori.manufactured import mms_error, observed_orders


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--levels", default="9,17,33,65")
    ap.add_argument("--nu", type=float, default=1.0)
    args = ap.parse_args(argv)

    levels = [int(n) for n in args.levels.split(",")]
    for nonlinear in (False, True):
        errs = [mms_error(n, nonlinear, args.nu) for n in levels]
        label = "navier-stokes" if nonlinear else "stokes"
        print(label)
        for n, e in zip(levels, errs):
            print(f"  n={n:<3} L2 error {e:.4e}")
        print("  orders " + " ".join(f"{o:.3f}" for o in observed_orders(errs)))


if __name__ == "__main__":
    sys.exit(main())
