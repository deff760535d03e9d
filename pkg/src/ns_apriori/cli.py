"""Command-line entry point: ``nsap <command> [options]``.

Exit codes: 0 success, 1 invalid input or config, 2 solver divergence,
3 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import exponents
from .config import OUTPUT_ENV, ConfigError, RunConfig, describe_schema
from .errors import LinearSolverStall, NonlinearDivergence
from .estimate_verify import product_rule_sweep, relative_change, theorem_sweep
from .fieldio import FieldFormatError, read_field, write_field
from .function_spaces import DEFAULT_PAIR_BUDGET, ScalarField, c_norm
from .interp_verify import (
    FunctionFamily,
    family_sweep,
    refinement_stability,
    scale_copy_deviation,
    scaling_balance_test,
    young_split_check,
)
from .manufactured import mms_error, observed_orders
from .ns_solver import FluidProblem, solve_navier_stokes

EXIT_OK, EXIT_INPUT, EXIT_DIVERGED, EXIT_VERIFY = 0, 1, 2, 3
MMS_MIN_ORDER = 1.7
SCALING_TOL = 0.15
Q_STABILITY_TOL = 0.2

log = logging.getLogger("nsap")

CSV_DOC = """\
CSV outputs (all values in repr() precision):
  trace.csv        iter,update_sup,residual_sup,div_max
  estimate.csv     amplitude,f_alpha,v_2a,gradp_a,v_w12,v_l6,nlterm_a,g_alpha,B,Q,C_nl,C_schauder,converged
  b_consistency.csv amplitude,B,Q,B_naive,Q_naive
  bounds.csv       amplitude,eps,g_alpha,bound,holds
  product_rule.csv lhs0,rhs0,lhsA,rhsA (violating fields only)
  interp.csv       kind,param,seed,l,q,alpha,lhs,norm_2a,norm_q,omega,ratio + C_emp lines
  interp_stability.csv l,C_emp_coarse,C_emp_fine,rel_change
  scaling.csv      l,omega,s_lhs,s_rhs,gap
  young.csv        eps,c_closed,c_search + fitted slopes and violation count
  mms.csv          n,stokes_error,ns_error
  norms            component,m,alpha,sup_order0..m,holder_top,c_norm,q,lq_norm,sobolev_norm,pair_budget,seed
Every CSV starts with a '# generated <UTC time>' line unless --no-timestamp is given.
"""


class Output:
    def __init__(self, directory: Path, timestamp: bool):
        self.dir = directory
        self.timestamp = timestamp

    def path(self, name: str) -> Path:
        self.dir.mkdir(parents=True, exist_ok=True)
        return self.dir / name

    def csv(self, name: str, text: str) -> Path:
        head = ""
        if self.timestamp:
            head = f"# generated {_dt.datetime.now(_dt.timezone.utc).isoformat(timespec='seconds')}\n"
        p = self.path(name)
        p.write_text(head + text)
        return p


def _rows_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in r])
    return buf.getvalue()


def _load_config(args) -> RunConfig:
    cfg = RunConfig.load(getattr(args, "config", None), getattr(args, "set", None) or ())
    if getattr(args, "output", None):
        cfg = cfg.updated({"output.dir": args.output})
    return cfg


def _output(args, cfg: RunConfig) -> Output:
    return Output(cfg.output_dir, not args.no_timestamp)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_exponents(args) -> int:
    ex = exponents.ExponentSet.build(args.alpha, args.q)
    rows = [
        ("omega_0", ex.omega_0), ("omega_alpha", ex.omega_alpha), ("omega_1", ex.omega_1),
        ("omega_1+alpha", ex.omega_1alpha),
    ]
    if args.l is not None:
        rows.append((f"omega(l={args.l:g})", ex.omega(args.l)))
    rows += [("a1", ex.a1), ("a2", ex.a2), ("A_alt", ex.A_alt), ("A_young", ex.A_young), ("B", ex.B)]
    print(f"alpha = {args.alpha:g}, q = {args.q:g}")
    for name, val in rows:
        print(f"{name:<16} {val:.12g}")
    return EXIT_OK


def cmd_norms(args) -> int:
    u = read_field(args.input)
    comps = [u] if isinstance(u, ScalarField) else list(u.components)
    rows, header = [], None
    for k, c in enumerate(comps):
        rep = c_norm(c, args.m, args.alpha, args.pair_budget, args.seed, q=args.q)
        row = {"component": k, **rep.as_row()}
        header = list(row)
        rows.append([row[h] for h in header])
    text = _rows_csv(header, rows)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify_interp(args) -> int:
    cfg = _load_config(args)
    out = _output(args, cfg)
    alpha, q, seed = cfg["norms.alpha"], cfg["norms.q"], cfg["seed"]
    grid = cfg.grid
    if grid.n < 9:
        raise ConfigError(f"verify-interp needs n >= 9, got {grid.n}")
    ls = [0.0, alpha, 1.0, 1.0 + alpha]
    fam = FunctionFamily("mixed", cfg["interp.count"], seed)
    coarse = family_sweep(fam, ls, q, alpha, grid, scale_copies=(0.5, 3.0))
    fine = family_sweep(fam, ls, q, alpha, grid.refine())
    out.csv("interp.csv", coarse.to_csv())
    out.csv("interp_fine.csv", fine.to_csv())
    stab = refinement_stability(coarse, fine)
    out.csv("interp_stability.csv", _rows_csv(
        ["l", "C_emp_coarse", "C_emp_fine", "rel_change"],
        [(l, coarse.c_emp[l], fine.c_emp[l], stab[l]) for l in ls]))

    scale_gap = scale_copy_deviation(coarse)
    fits = [scaling_balance_test(l=l, q=q, alpha=alpha, seed=seed) for l in (0.0, 1.0)]
    out.csv("scaling.csv", _rows_csv(["l", "omega", "s_lhs", "s_rhs", "gap"],
                                     [(f.l, f.omega, f.s_lhs, f.s_rhs, f.gap) for f in fits]))

    ok = True
    finite = all(math.isfinite(r.ratio) for r in coarse.rows + fine.rows)
    for l in ls:
        passed = stab[l] <= cfg["interp.stability_tol"]
        ok &= passed
        print(f"C_emp l={l:g}: n={grid.n} {coarse.c_emp[l]:.6g}  n={fine.n} {fine.c_emp[l]:.6g}  "
              f"change {stab[l]:.3%} {'ok' if passed else 'FAIL'}")
    for f in fits:
        passed = f.gap <= SCALING_TOL
        ok &= passed
        print(f"scaling l={f.l:g}: s_lhs={f.s_lhs:.4f} s_rhs={f.s_rhs:.4f} {'ok' if passed else 'FAIL'}")
    outliers = coarse.outliers() + fine.outliers()
    print(f"finite ratios: {finite}; scale-copy deviation {scale_gap:.2e}; outliers {len(outliers)}")
    ok &= finite and scale_gap <= 1e-10 and not outliers
    return EXIT_OK if ok else EXIT_VERIFY


def _dump_state(out: Output, prefix: str, f, state):
    write_field(out.path(f"{prefix}forcing.nsf"), f)
    write_field(out.path(f"{prefix}velocity.nsf"), state.velocity_nodes())
    write_field(out.path(f"{prefix}pressure.nsf"), state.pressure_nodes())
    write_field(out.path(f"{prefix}gradp.nsf"), state.pressure_gradient_nodes())


def _trace_csv(trace) -> str:
    return _rows_csv(["iter", "update_sup", "residual_sup", "div_max"],
                     [(t.iter, t.update_sup, t.residual_sup, t.div_max) for t in trace])


def cmd_solve(args) -> int:
    cfg = _load_config(args)
    out = _output(args, cfg)
    grid, nu = cfg.grid, cfg["fluid.nu"]
    f = cfg.forcing.nodes(grid, nu)
    try:
        state = solve_navier_stokes(FluidProblem(nu, f), cfg.solver)
    except NonlinearDivergence as exc:
        out.csv("trace.csv", _trace_csv(exc.trace))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    out.csv("trace.csv", _trace_csv(state.trace))
    _dump_state(out, "", f, state)
    print(f"converged in {len(state.trace)} Picard iterations; "
          f"max |div v| = {state.max_divergence():.3e}; sup|v| = {state.velocity_nodes().values.__abs__().max():.6g}")
    print(f"wrote velocity.nsf, pressure.nsf, gradp.nsf, forcing.nsf, trace.csv to {out.dir}")
    return EXIT_OK


def cmd_mms(args) -> int:
    cfg = _load_config(args)
    out = _output(args, cfg)
    levels = [int(x) for x in args.levels.split(",")]
    if len(levels) < 2:
        raise ConfigError("need at least two grid levels")
    nu = cfg["fluid.nu"]
    es = [mms_error(n, False, nu, cfg=cfg.solver) for n in levels]
    en = [mms_error(n, True, nu, cfg=cfg.solver) for n in levels]
    out.csv("mms.csv", _rows_csv(["n", "stokes_error", "ns_error"], zip(levels, es, en)))
    os_, on = observed_orders(es), observed_orders(en)
    print("n      stokes_err    ns_err")
    for n, a, b in zip(levels, es, en):
        print(f"{n:<6} {a:.4e}    {b:.4e}")
    print("observed orders stokes: " + " ".join(f"{o:.3f}" for o in os_))
    print("observed orders navier-stokes: " + " ".join(f"{o:.3f}" for o in on))
    ok = min(os_ + on) >= MMS_MIN_ORDER
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_verify_estimate(args) -> int:
    cfg = _load_config(args)
    out = _output(args, cfg)
    nu, alpha, q, seed = cfg["fluid.nu"], cfg["norms.alpha"], cfg["norms.q"], cfg["seed"]
    amps = cfg["sweep.amplitudes"]
    base = cfg.forcing.scaled(1.0)
    sweep = theorem_sweep(amps, base, nu, alpha, cfg.grid, cfg.solver, q, DEFAULT_PAIR_BUDGET, seed,
                          keep_states=True)
    out.csv("estimate.csv", sweep.to_csv())
    out.csv("b_consistency.csv", sweep.b_consistency_csv())
    out.csv("bounds.csv", sweep.bounds_csv())
    for k, (f, st) in enumerate(zip(sweep.forcings, sweep.states)):
        if st is not None:
            _dump_state(out, f"amp{k}_", f, st)
    diverged = [r.amplitude for r in sweep.reports if not r.converged]
    ok = all(math.isfinite(r.Q) for r in sweep.converged) and all(b.ok for b in sweep.bound_checks())
    print(f"n={sweep.n}: max Q = {sweep.max_Q:.6g}, max C_nl = {sweep.max_C_nl:.6g}, "
          f"max C_schauder = {sweep.max_C_schauder:.6g}")
    if args.product_fields:
        bad = product_rule_sweep(args.product_fields, alpha=alpha, seed=seed)
        out.csv("product_rule.csv", _rows_csv(["lhs0", "rhs0", "lhsA", "rhsA"],
                                              [(b.lhs0, b.rhs0, b.lhsA, b.rhsA) for b in bad]))
        ok &= not bad
        print(f"product rule: {len(bad)} violations over {args.product_fields} random-Fourier fields")
    if not args.no_refine:
        fine = theorem_sweep(amps, base, nu, alpha, cfg.grid.refine(), cfg.solver, q,
                             DEFAULT_PAIR_BUDGET, seed)
        out.csv("estimate_fine.csv", fine.to_csv())
        change = relative_change(sweep.max_Q, fine.max_Q)
        stable = change <= Q_STABILITY_TOL
        ok &= stable
        print(f"n={fine.n}: max Q = {fine.max_Q:.6g}; change {change:.3%} {'ok' if stable else 'FAIL'}")
        diverged += [r.amplitude for r in fine.reports if not r.converged]
    if diverged:
        print(f"error: solver diverged at amplitudes {sorted(set(diverged))}", file=sys.stderr)
        return EXIT_DIVERGED
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_young(args) -> int:
    cfg = _load_config(args)
    out = _output(args, cfg)
    a1, a2 = exponents.a_exponents(cfg["norms.alpha"])
    rep = young_split_check(a1, a2, trials=args.trials, seed=cfg["seed"])
    out.csv("young.csv", rep.to_csv())
    print(f"a1 = {a1:.12g}, B = {rep.B:.12g}")
    print(f"fitted slope (closed form)    {rep.slope_closed:.10f}")
    print(f"fitted slope (random search)  {rep.slope_search:.10f}")
    print(f"-A_young = {-rep.A_young:.10f}   -A_alt = {-rep.A_alt:.10f}")
    print(f"split violations: {rep.violations} of {rep.triples}")
    return EXIT_OK if rep.ok else EXIT_VERIFY


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="nsap",
        description="Discrete Hölder-norm checks of a-priori estimates for steady Navier-Stokes on the unit cube.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=f"config keys (YAML, dotted or nested) and defaults:\n{describe_schema()}\n\n"
               f"default output directory: ${OUTPUT_ENV} or ./nsap_out\n\n{CSV_DOC}"
               "exit codes: 0 ok, 1 invalid input/config, 2 solver divergence, 3 verification failure",
    )
    p.add_argument("-v", "--verbose", action="store_true", help="log solver progress")
    sub = p.add_subparsers(dest="command", required=True)

    def run_opts(sp):
        sp.add_argument("--config", help="YAML run config")
        sp.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config key (repeatable)")
        sp.add_argument("--output", help="output directory (overrides output.dir)")
        sp.add_argument("--no-timestamp", action="store_true", help="omit the timestamp line from CSVs")

    sp = sub.add_parser("exponents", help="print interpolation and Young exponents")
    sp.add_argument("--alpha", type=float, default=0.5, help="Hölder exponent in (0,1) (default 0.5)")
    sp.add_argument("--q", type=float, default=6.0, help="Lebesgue index (default 6)")
    sp.add_argument("--l", type=float, default=None, help="extra intermediate smoothness to report")
    sp.set_defaults(func=cmd_exponents)

    sp = sub.add_parser("norms", help="norm report of an NSFLD1 field, one CSV row per component")
    sp.add_argument("input", help="NSFLD1 file")
    sp.add_argument("--alpha", type=float, default=0.5, help="Hölder exponent (default 0.5)")
    sp.add_argument("--q", type=float, default=6.0, help="Lebesgue index (default 6)")
    sp.add_argument("--m", type=int, default=2, help="derivative order 0..2 (default 2)")
    sp.add_argument("--pair-budget", type=int, default=DEFAULT_PAIR_BUDGET,
                    help=f"pairs per Hölder seminorm (default {DEFAULT_PAIR_BUDGET})")
    sp.add_argument("--seed", type=int, default=0, help="pair-sampling seed (default 0)")
    sp.add_argument("--out", help="write CSV here instead of stdout")
    sp.set_defaults(func=cmd_norms)

    sp = sub.add_parser("verify-interp", help="interpolation ratios, refinement stability and scaling balance")
    run_opts(sp)
    sp.set_defaults(func=cmd_verify_interp)

    sp = sub.add_parser("solve", help="solve the steady problem and dump fields and the Picard trace")
    run_opts(sp)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("mms", help="manufactured-solution convergence orders")
    run_opts(sp)
    sp.add_argument("--levels", default="9,17,33", help="comma-separated grid sizes (default 9,17,33)")
    sp.set_defaults(func=cmd_mms)

    sp = sub.add_parser("verify-estimate", help="theorem sweep, chain constants and the epsilon bound")
    run_opts(sp)
    sp.add_argument("--no-refine", action="store_true", help="skip the refined-grid stability sweep")
    sp.add_argument("--product-fields", type=int, default=100,
                    help="random-Fourier fields for the product-rule check, 0 to skip (default 100)")
    sp.set_defaults(func=cmd_verify_estimate)

    sp = sub.add_parser("young", help="Young split exponent fit and stress test")
    run_opts(sp)
    sp.add_argument("--trials", type=int, default=20000, help="random-search samples per epsilon (default 20000)")
    sp.set_defaults(func=cmd_young)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (NonlinearDivergence, LinearSolverStall) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    except (ConfigError, FieldFormatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
