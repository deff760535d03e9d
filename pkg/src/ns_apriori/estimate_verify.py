"""The a-priori estimate chain evaluated on discrete solutions.

For a steady solution of  -nu lap v + (v.grad) v + grad p = f  the chain is

    |N|^(alpha)          <= C_nl (|v|^(2+alpha))^a1 (||v||_6)^a2,   N = (v.grad) v
    |v|^(2+alpha) + |grad p|^(alpha) <= C_s |f - N|^(alpha)
    |v|^(2+alpha)        <= C |f|^(alpha) + C (||v||_W12)^B.

All constants are measured, never asserted against a target.  Vector norms are
sums of component norms, which keeps the product-rule bounds literal.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field

from . import exponents
from .errors import InconsistencyError, NonlinearDivergence, UndefinedRatioError
from .forcing import ForcingSpec, prescribed_stokes_faces, prescribed_stokes_forcing
from .function_spaces import (
    DEFAULT_PAIR_BUDGET,
    Grid,
    VectorField,
    c_norm,
    derivative,
    holder_seminorm,
    lq_norm,
    sobolev_norm,
    sup_norm,
)
from .interp_verify import FunctionFamily, young_prefactor
from .ns_solver import FlowState, FluidProblem, SolverConfig, advect, solve_navier_stokes, solve_stokes

EPSILON_GRID = (0.5, 0.1, 0.02)
AXES = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


# ---------------------------------------------------------------------------
# product rule
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProductRule:
    lhs0: float
    rhs0: float
    lhsA: float
    rhsA: float

    def holds(self, slack: float = 1e-10) -> bool:
        return self.lhs0 <= self.rhs0 * (1 + slack) and self.lhsA <= self.rhsA * (1 + slack)


def product_rule_check(v: VectorField, alpha: float, pair_budget: int = DEFAULT_PAIR_BUDGET,
                       seed: int = 0) -> ProductRule:
    """Both sides of the sup and Hölder bounds on (v.grad)v, summed over i, k, l."""
    comps = v.components
    grads = [[derivative(vk, e) for e in AXES] for vk in comps]
    n_field = advect(v)

    def sem(u):
        return holder_seminorm(u, alpha, pair_budget, seed)

    sup_v = [sup_norm(c) for c in comps]
    sem_v = [sem(c) for c in comps]
    sup_d = [sup_norm(d) for row in grads for d in row]
    sem_d = [sem(d) for row in grads for d in row]
    rhs0 = sum(sup_v) * sum(sup_d)
    rhsA = sum(sup_v) * sum(sem_d) + sum(sem_v) * sum(sup_d)
    return ProductRule(sup_norm(n_field), rhs0, sem(n_field), rhsA)


def random_fourier_vector(grid: Grid, seed: int, modes: int = 4) -> VectorField:
    """Three independent random-Fourier components, reproducible from ``seed``."""
    fam = FunctionFamily("random_fourier", 3, seed, fourier_modes=modes)
    return VectorField.from_components([u for _, _, u in fam.members(grid)])


def product_rule_sweep(count: int = 100, grid: Grid | None = None, alpha: float = 0.5, seed: int = 0,
                       slack: float = 1e-10) -> list[ProductRule]:
    """Product-rule sides on ``count`` seeded random-Fourier fields; returns the violators."""
    grid = grid or Grid(9)
    bad = []
    for i in range(count):
        pr = product_rule_check(random_fourier_vector(grid, seed * 100_000 + i), alpha, seed=seed)
        if not pr.holds(slack):
            bad.append(pr)
    return bad


# ---------------------------------------------------------------------------
# chain constants
# ---------------------------------------------------------------------------


def nonlinear_holder_estimate(v: VectorField, alpha: float, q: float = exponents.SOBOLEV_Q,
                              pair_budget: int = DEFAULT_PAIR_BUDGET, seed: int = 0) -> float:
    """C_nl = |(v.grad)v|^(alpha) / ((|v|^(2+alpha))^a1 (||v||_6)^a2)."""
    if sup_norm(v) == 0.0:
        raise UndefinedRatioError("C_nl is undefined for the zero field")
    a1, a2 = exponents.a_exponents(alpha)
    top = c_norm(advect(v), 0, alpha, pair_budget, seed).c_norm
    v2a = c_norm(v, 2, alpha, pair_budget, seed).c_norm
    return top / (v2a**a1 * lq_norm(v, q) ** a2)


def _schauder(v2a: float, gradp_a: float, g_alpha: float) -> float:
    if g_alpha == 0.0:
        if v2a + gradp_a == 0.0:
            return 0.0
        raise InconsistencyError("nonzero Stokes state with zero right-hand side")
    return (v2a + gradp_a) / g_alpha


def schauder_ratio(state: FlowState, g: VectorField, alpha: float,
                   pair_budget: int = DEFAULT_PAIR_BUDGET, seed: int = 0) -> float:
    """(|v|^(2+alpha) + |grad p|^(alpha)) / |g|^(alpha) for a Stokes state with data g."""
    v2a = c_norm(state.velocity_nodes(), 2, alpha, pair_budget, seed).c_norm
    gpa = c_norm(state.pressure_gradient_nodes(), 0, alpha, pair_budget, seed).c_norm
    return _schauder(v2a, gpa, c_norm(g, 0, alpha, pair_budget, seed).c_norm)


@dataclass
class SchauderFamily:
    n: int
    ratios: list[float]

    @property
    def c_schauder(self) -> float:
        return max(self.ratios)


def schauder_family(grid: Grid, count: int = 20, seed: int = 0, nu: float = 1.0, alpha: float = 0.5,
                    cfg: SolverConfig = SolverConfig(), pair_budget: int = DEFAULT_PAIR_BUDGET) -> SchauderFamily:
    """Schauder ratios over seeded Stokes data with smooth wall-compatible solutions."""
    ratios = []
    for i in range(count):
        member = seed * 1000 + i
        state = solve_stokes(prescribed_stokes_faces(grid, member, nu), nu, grid, cfg)
        g = VectorField.from_function(grid, prescribed_stokes_forcing(member, nu)[0])
        ratios.append(schauder_ratio(state, g, alpha, pair_budget, seed))
    return SchauderFamily(grid.n, ratios)


# ---------------------------------------------------------------------------
# per-solve report
# ---------------------------------------------------------------------------

CSV_COLUMNS = (
    "amplitude", "f_alpha", "v_2a", "gradp_a", "v_w12", "v_l6", "nlterm_a",
    "g_alpha", "B", "Q", "C_nl", "C_schauder", "converged",
)


@dataclass
class EstimateReport:
    amplitude: float
    f_alpha: float
    v_2a: float
    gradp_a: float
    v_w12: float
    v_l6: float
    nlterm_a: float
    g_alpha: float
    B: float
    Q: float
    C_nl: float
    C_schauder: float
    converged: bool
    Q_naive: float = math.nan

    def row(self) -> list:
        return [repr(float(getattr(self, c))) if c != "converged" else int(self.converged) for c in CSV_COLUMNS]

    @classmethod
    def failed(cls, amplitude: float, B: float) -> "EstimateReport":
        nan = math.nan
        return cls(amplitude, nan, nan, nan, nan, nan, nan, nan, B, nan, nan, nan, False)


def estimate_from_fields(amplitude: float, f: VectorField, v: VectorField, gradp: VectorField,
                         alpha: float, q: float = exponents.SOBOLEV_Q,
                         pair_budget: int = DEFAULT_PAIR_BUDGET, seed: int = 0) -> EstimateReport:
    """Every report entry from nodal f, v and grad p alone."""
    a1, a2 = exponents.a_exponents(alpha)
    _, _, B = exponents.young_exponents(a1, a2)
    nl = advect(v)
    g = f - nl
    f_a = c_norm(f, 0, alpha, pair_budget, seed).c_norm
    v2a = c_norm(v, 2, alpha, pair_budget, seed).c_norm
    gpa = c_norm(gradp, 0, alpha, pair_budget, seed).c_norm
    nla = c_norm(nl, 0, alpha, pair_budget, seed).c_norm
    g_a = c_norm(g, 0, alpha, pair_budget, seed).c_norm
    w12 = sobolev_norm(v, 1, 2.0)
    l6 = lq_norm(v, q)
    if v2a == 0.0:
        Q = Q_naive = c_nl = 0.0
    else:
        Q = v2a / (f_a + w12**B)
        Q_naive = v2a / (f_a + w12**2)
        c_nl = nla / (v2a**a1 * l6**a2)
    return EstimateReport(amplitude, f_a, v2a, gpa, w12, l6, nla, g_a, B, Q, c_nl,
                          _schauder(v2a, gpa, g_a), True, Q_naive)


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundCheck:
    """|g|^(alpha) <= eps |v|^(2+alpha) + |f|^(alpha) + C eps^(-A) (||v||_6)^B."""

    amplitude: float
    eps: float
    lhs: float
    rhs: float

    @property
    def ok(self) -> bool:
        return self.lhs <= self.rhs * (1 + 1e-12)


@dataclass
class SweepResult:
    reports: list[EstimateReport]
    alpha: float
    n: int
    states: list = field(default_factory=list, repr=False)
    forcings: list = field(default_factory=list, repr=False)

    @property
    def converged(self) -> list[EstimateReport]:
        return [r for r in self.reports if r.converged]

    @property
    def max_Q(self) -> float:
        return max((r.Q for r in self.converged), default=math.nan)

    @property
    def max_C_nl(self) -> float:
        return max((r.C_nl for r in self.converged), default=math.nan)

    @property
    def max_C_schauder(self) -> float:
        return max((r.C_schauder for r in self.converged), default=math.nan)

    def young_constant(self) -> float:
        """C in the split C_nl X^a1 Y^a2 <= eps X + C eps^(-A_young) Y^B."""
        a1, _ = exponents.a_exponents(self.alpha)
        return young_prefactor(a1) * self.max_C_nl ** (1.0 / (1.0 - a1))

    def bound_checks(self, epsilons=EPSILON_GRID) -> list[BoundCheck]:
        a1, a2 = exponents.a_exponents(self.alpha)
        _, A, B = exponents.young_exponents(a1, a2)
        C = self.young_constant()
        out = []
        for r in self.converged:
            for e in epsilons:
                rhs = e * r.v_2a + r.f_alpha + C * e ** (-A) * r.v_l6**B
                out.append(BoundCheck(r.amplitude, e, r.g_alpha, rhs))
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.reports:
            w.writerow(r.row())
        return buf.getvalue()

    def b_consistency_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["amplitude", "B", "Q", "B_naive", "Q_naive"])
        for r in self.reports:
            w.writerow([repr(float(r.amplitude)), repr(float(r.B)), repr(float(r.Q)), "2.0", repr(float(r.Q_naive))])
        return buf.getvalue()

    def bounds_csv(self, epsilons=EPSILON_GRID) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["amplitude", "eps", "g_alpha", "bound", "holds"])
        for b in self.bound_checks(epsilons):
            w.writerow([repr(float(b.amplitude)), repr(float(b.eps)), repr(float(b.lhs)), repr(float(b.rhs)), int(b.ok)])
        return buf.getvalue()


def theorem_sweep(amplitudes, base_forcing: ForcingSpec = ForcingSpec(), nu: float = 1.0,
                  alpha: float = 0.5, grid: Grid | None = None, cfg: SolverConfig = SolverConfig(),
                  q: float = exponents.SOBOLEV_Q, pair_budget: int = DEFAULT_PAIR_BUDGET,
                  seed: int = 0, keep_states: bool = False) -> SweepResult:
    """Solve for each amplitude and evaluate the whole chain.

    A solve that diverges yields a flagged report (``converged=False``, NaN
    entries) instead of aborting the sweep.
    """
    grid = grid or Grid(17)
    a1, a2 = exponents.a_exponents(alpha)
    B = exponents.young_exponents(a1, a2)[2]
    result = SweepResult([], alpha, grid.n)
    for amp in map(float, amplitudes):
        f = base_forcing.scaled(amp).nodes(grid, nu)
        try:
            state = solve_navier_stokes(FluidProblem(nu, f), cfg)
        except NonlinearDivergence:
            result.reports.append(EstimateReport.failed(amp, B))
            if keep_states:
                result.states.append(None)
                result.forcings.append(f)
            continue
        rep = estimate_from_fields(amp, f, state.velocity_nodes(), state.pressure_gradient_nodes(),
                                   alpha, q, pair_budget, seed)
        result.reports.append(rep)
        if keep_states:
            result.states.append(state)
            result.forcings.append(f)
    return result


def relative_change(coarse: float, fine: float) -> float:
    return abs(fine - coarse) / abs(fine)


def report_dict(rep: EstimateReport) -> dict:
    return asdict(rep)
