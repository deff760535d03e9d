"""Empirical interpolation constants per family kind and intermediate order l."""
import argparse
import sys
from pathlib import Path

from ns_apriori.function_spaces import Grid
from ns_apriori.interp_verify import KINDS, FunctionFamily, family_sweep, refinement_stability


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=50)
    ap.add_argument("--alpha", type=float, default=0.5)
    ap.add_argument("--q", type=float, default=6.0)
    ap.add_argument("--n", type=int, default=17)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--outdir", default="results")
    args = ap.parse_args(argv)

    ls = [0.0, args.alpha, 1.0, 1.0 + args.alpha]
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    grid = Grid(args.n)
    print("kind            " + "".join(f"l={l:<8g}" for l in ls) + "  max change")
    for kind in KINDS + ("mixed",):
        fam = FunctionFamily(kind, args.count, args.seed)
        coarse = family_sweep(fam, ls, args.q, args.alpha, grid)
        fine = family_sweep(fam, ls, args.q, args.alpha, grid.refine())
        (outdir / f"interp_{kind}.csv").write_text(coarse.to_csv())
        stab = refinement_stability(coarse, fine)
        print(f"{kind:<16}" + "".join(f"{coarse.c_emp[l]:<10.4f}" for l in ls) + f"  {max(stab.values()):.2%}")
        for row in coarse.outliers():
            print(f"    outlier: {row.kind} {row.param} l={row.l:g} ratio {row.ratio:.4g}")


if __name__ == "__main__":
    sys.exit(main())
