"""Empirical checks of the Hölder/Lebesgue interpolation inequality

    |u|^(l) <= C (|u|^(2+alpha))**omega (||u||_q)**(1-omega),
    omega = (q l + 3) / (q (2 + alpha) + 3),

of the scaling balance that singles out ``omega``, and of Young's inequality
with epsilon as used to absorb the nonlinear term.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from . import exponents
from .errors import DomainError, InvalidFamilyError, UndefinedRatioError
from .function_spaces import (
    DEFAULT_PAIR_BUDGET,
    Grid,
    ScalarField,
    c_norm,
    integer_norm,
    lq_norm,
    sup_norm,
)

KINDS = ("polynomial", "trig", "gaussian_bump", "random_fourier")


# ---------------------------------------------------------------------------
# function families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FunctionFamily:
    """Deterministic corpus of smooth test functions on the closed cube.

    ``kind="mixed"`` cycles through the four base kinds.
    """

    kind: str
    count: int
    seed: int = 0
    max_degree: int = 4
    max_wave: int = 3
    sigma_range: tuple[float, float] = (0.05, 0.5)
    fourier_modes: int = 4

    def __post_init__(self):
        if self.kind not in KINDS + ("mixed",):
            raise DomainError(f"unknown family kind {self.kind!r}")
        if self.count < 1:
            raise DomainError("family must be nonempty")
        if not (0 <= self.max_degree <= 4):
            raise DomainError("polynomial degree must lie in 0..4")
        if not (1 <= self.max_wave <= 3):
            raise DomainError("wave numbers must lie in 1..3")
        lo, hi = self.sigma_range
        if not (0.05 <= lo <= hi <= 0.5):
            raise DomainError("bump widths must lie in [0.05, 0.5]")

    def member_kind(self, i: int) -> str:
        return KINDS[i % len(KINDS)] if self.kind == "mixed" else self.kind

    def spec(self, i: int) -> tuple[str, str, object]:
        """(kind, parameter string, callable) for member ``i``."""
        kind = self.member_kind(i)
        rng = np.random.default_rng([self.seed, i])
        return (kind, *getattr(self, f"_make_{kind}")(rng))

    def members(self, grid: Grid):
        for i in range(self.count):
            kind, param, func = self.spec(i)
            yield kind, param, ScalarField.from_function(grid, func)

    def _make_polynomial(self, rng):
        deg = int(rng.integers(0, self.max_degree + 1))
        powers = [p for p in product(range(deg + 1), repeat=3) if sum(p) <= deg]
        coef = rng.normal(size=len(powers))

        def func(x, y, z):
            out = np.zeros_like(x)
            for c, (a, b, d) in zip(coef, powers):
                out = out + c * x**a * y**b * z**d
            return out

        return f"deg={deg}", func

    def _make_trig(self, rng):
        k = rng.integers(0, self.max_wave + 1, size=3)
        if not k.any():
            k[int(rng.integers(0, 3))] = 1
        ph = rng.uniform(0, 2 * np.pi, size=3)

        def func(x, y, z):
            return (
                np.cos(np.pi * k[0] * x + ph[0])
                * np.cos(np.pi * k[1] * y + ph[1])
                * np.cos(np.pi * k[2] * z + ph[2])
            )

        return f"k={k[0]}{k[1]}{k[2]}", func

    def _make_gaussian_bump(self, rng):
        sigma = float(rng.uniform(*self.sigma_range))
        c = rng.uniform(0.2, 0.8, size=3)

        def func(x, y, z):
            r2 = (x - c[0]) ** 2 + (y - c[1]) ** 2 + (z - c[2]) ** 2
            return np.exp(-r2 / (2 * sigma**2))

        return f"sigma={sigma:.4f}", func

    def _make_random_fourier(self, rng):
        modes = []
        for _ in range(self.fourier_modes):
            k = rng.integers(0, self.max_wave + 1, size=3)
            ph = rng.uniform(0, 2 * np.pi)
            amp = rng.normal() / (1.0 + float(k @ k))
            modes.append((k, ph, amp))

        def func(x, y, z):
            out = np.zeros_like(x)
            for k, ph, amp in modes:
                out = out + amp * np.cos(np.pi * (k[0] * x + k[1] * y + k[2] * z) + ph)
            return out

        return f"modes={self.fourier_modes}", func


# ---------------------------------------------------------------------------
# interpolation ratio
# ---------------------------------------------------------------------------


def intermediate_norm(u, l: float, pair_budget=DEFAULT_PAIR_BUDGET, seed=0) -> float:
    """|u|^(l): the sup-sum |u|^(m) for integer l, the full C^(m+s) norm otherwise."""
    m = math.floor(l)
    frac = l - m
    if frac < 1e-12:
        return integer_norm(u, m)
    return c_norm(u, m, frac, pair_budget, seed).c_norm


@dataclass(frozen=True)
class RatioParts:
    lhs: float
    norm_2a: float
    norm_q: float
    omega: float

    @property
    def ratio(self) -> float:
        return self.lhs / (self.norm_2a**self.omega * self.norm_q ** (1.0 - self.omega))


def ratio_parts(u, l, q, alpha, pair_budget=DEFAULT_PAIR_BUDGET, seed=0, norm_2a=None, norm_q=None):
    w = exponents.omega(l, q, alpha)
    if not l < 2 + alpha:
        raise DomainError(f"l must lie below 2 + alpha, got {l}")
    if sup_norm(u) == 0.0:
        raise UndefinedRatioError("interpolation ratio is undefined for the zero field")
    if norm_2a is None:
        norm_2a = c_norm(u, 2, alpha, pair_budget, seed).c_norm
    if norm_q is None:
        norm_q = lq_norm(u, q)
    return RatioParts(intermediate_norm(u, l, pair_budget, seed), norm_2a, norm_q, w)


def interpolation_ratio(u, l: float, q: float = 6.0, alpha: float = 0.5,
                        pair_budget: int = DEFAULT_PAIR_BUDGET, seed: int = 0) -> float:
    return ratio_parts(u, l, q, alpha, pair_budget, seed).ratio


@dataclass
class InterpRow:
    kind: str
    param: str
    seed: int
    l: float
    q: float
    alpha: float
    lhs: float
    norm_2a: float
    norm_q: float
    omega: float
    ratio: float
    member: int = 0
    scale: float = 1.0


CSV_COLUMNS = ("kind", "param", "seed", "l", "q", "alpha", "lhs", "norm_2a", "norm_q", "omega", "ratio")


@dataclass
class InterpReport:
    rows: list[InterpRow]
    c_emp: dict
    n: int
    seed: int

    def ratios(self, l) -> np.ndarray:
        return np.array([r.ratio for r in self.rows if r.l == l])

    def outliers(self, factor: float = 10.0) -> list[InterpRow]:
        """Members whose ratio exceeds ``factor`` times the family median for their l."""
        out = []
        for l in self.c_emp:
            med = float(np.median(self.ratios(l)))
            out += [r for r in self.rows if r.l == l and r.ratio > factor * med]
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.rows:
            w.writerow([r.kind, r.param, r.seed] + [repr(float(getattr(r, c))) for c in CSV_COLUMNS[3:]])
        for l, c in self.c_emp.items():
            w.writerow([f"C_emp[l={l!r}]", repr(float(c))])
        if len(self.c_emp) == 1:
            w.writerow(["C_emp", repr(float(next(iter(self.c_emp.values()))))])
        return buf.getvalue()


def family_sweep(family: FunctionFamily, l, q: float, alpha: float, grid: Grid,
                 pair_budget: int = DEFAULT_PAIR_BUDGET, scale_copies=()) -> InterpReport:
    """Interpolation ratios of every member; ``C_emp`` is the max per l.

    ``l`` may be a single value or a sequence; the expensive norms are shared.
    ``scale_copies`` adds lambda*u duplicates of every member.
    """
    ls = [float(l)] if np.isscalar(l) else [float(x) for x in l]
    rows = []
    for idx, (kind, param, u) in enumerate(family.members(grid)):
        variants = [(param, 1.0, u)] + [(f"{param};x{lam:g}", lam, lam * u) for lam in scale_copies]
        for p, lam, field_ in variants:
            n2a = c_norm(field_, 2, alpha, pair_budget, family.seed).c_norm
            nq = lq_norm(field_, q)
            for lv in ls:
                parts = ratio_parts(field_, lv, q, alpha, pair_budget, family.seed, n2a, nq)
                rows.append(InterpRow(kind, p, family.seed, lv, q, alpha, parts.lhs,
                                      parts.norm_2a, parts.norm_q, parts.omega, parts.ratio, idx, lam))
    c_emp = {lv: max(r.ratio for r in rows if r.l == lv) for lv in ls}
    return InterpReport(rows, c_emp, grid.n, family.seed)


def scale_copy_deviation(report: InterpReport) -> float:
    """Largest relative gap between a scaled copy's ratio and its member's ratio."""
    base = {(r.member, r.l): r.ratio for r in report.rows if r.scale == 1.0}
    gaps = [abs(r.ratio / base[(r.member, r.l)] - 1.0) for r in report.rows if r.scale != 1.0]
    return max(gaps, default=0.0)


def refinement_stability(coarse: InterpReport, fine: InterpReport) -> dict:
    """Relative change |C(fine) - C(coarse)| / C(fine) per l."""
    return {l: abs(fine.c_emp[l] - coarse.c_emp[l]) / fine.c_emp[l] for l in fine.c_emp}


# ---------------------------------------------------------------------------
# scaling balance
# ---------------------------------------------------------------------------

BUMP_CENTER = (0.5, 0.5, 0.5)
BUMP_RADIUS = 0.45


def bump_profile(r: np.ndarray) -> np.ndarray:
    """(1 - r^2)^4 for r < 1, zero outside.

    C^3 across the support edge, so C^(2+alpha) for every alpha, and far better
    resolved on coarse grids than the exp(-1/(1-r^2)) bump whose steep edge
    hides the top-order scaling until the mesh is very fine.
    """
    return np.clip(1.0 - r**2, 0.0, None) ** 4


def exp_bump_profile(r: np.ndarray) -> np.ndarray:
    """exp(1 - 1/(1 - r^2)) for r < 1, zero outside; C^inf, equals 1 at r = 0."""
    out = np.zeros_like(r)
    inside = r < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - r[inside] ** 2))
    return out


PROFILES = {"poly": bump_profile, "exp": exp_bump_profile}


def dilated_bump(grid: Grid, mu: float, amplitude: float = 1.0, radius: float = BUMP_RADIUS,
                 profile: str = "poly") -> ScalarField:
    """u_mu(x) = amplitude * phi(mu |x - x0| / radius), support radius radius/mu."""
    if radius / mu >= min(min(c, 1 - c) for c in BUMP_CENTER):
        raise InvalidFamilyError(f"bump support of radius {radius / mu:.3f} leaves the cube")
    x, y, z = grid.mesh()
    r = np.sqrt(sum((a - c) ** 2 for a, c in zip((x, y, z), BUMP_CENTER))) * mu / radius
    return ScalarField(grid, amplitude * PROFILES[profile](r))


@dataclass(frozen=True)
class ScalingFit:
    l: float
    omega: float
    s_lhs: float
    s_rhs: float
    lhs: tuple
    rhs: tuple

    @property
    def gap(self) -> float:
        return abs(self.s_lhs - self.s_rhs)


def scaling_balance_test(bump_scales=(1, 2, 4, 8), l: float = 0.0, q: float = 6.0, alpha: float = 0.5,
                         grid: Grid | None = None, amplitudes=None,
                         pair_budget: int = 4 * DEFAULT_PAIR_BUDGET, seed: int = 0,
                         radius: float = BUMP_RADIUS, profile: str = "poly") -> ScalingFit:
    """Log-log slopes in mu of |u_mu|^(l) and of (|u_mu|^(2+alpha))^omega ||u_mu||_q^(1-omega)."""
    grid = grid or Grid(65)
    w = exponents.omega(l, q, alpha)
    amplitudes = amplitudes or [1.0] * len(bump_scales)
    lhs, rhs = [], []
    for mu, amp in zip(bump_scales, amplitudes):
        u = dilated_bump(grid, mu, amp, radius, profile)
        parts = ratio_parts(u, l, q, alpha, pair_budget, seed)
        lhs.append(parts.lhs)
        rhs.append(parts.norm_2a**w * parts.norm_q ** (1 - w))
    logmu = np.log(np.asarray(bump_scales, dtype=float))
    s_lhs = float(np.polyfit(logmu, np.log(lhs), 1)[0])
    s_rhs = float(np.polyfit(logmu, np.log(rhs), 1)[0])
    return ScalingFit(l, w, s_lhs, s_rhs, tuple(lhs), tuple(rhs))


# ---------------------------------------------------------------------------
# Young's inequality with epsilon
# ---------------------------------------------------------------------------


def young_prefactor(a1: float) -> float:
    """c0 in sup_X (X^a1 - eps X) = c0 * eps^(-a1/(1-a1))."""
    return (1.0 - a1) * a1 ** (a1 / (1.0 - a1))


def young_constant(a1: float, eps):
    """Smallest C(eps) with X^a1 <= eps X + C(eps) for all X > 0."""
    return young_prefactor(a1) * np.asarray(eps, dtype=float) ** (-a1 / (1.0 - a1))


@dataclass
class YoungReport:
    a1: float
    a2: float
    B: float
    A_alt: float
    A_young: float
    epsilons: np.ndarray
    c_closed: np.ndarray
    c_search: np.ndarray
    slope_closed: float
    slope_search: float
    triples: int
    violations: int
    max_usage: float
    prefactor: float

    @property
    def ok(self) -> bool:
        return (
            abs(self.slope_closed + self.A_young) <= 1e-6
            and abs(self.slope_search + self.A_young) <= 0.05
            and self.violations == 0
        )

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["eps", "c_closed", "c_search"])
        for e, c1, c2 in zip(self.epsilons, self.c_closed, self.c_search):
            w.writerow([repr(float(e)), repr(float(c1)), repr(float(c2))])
        w.writerow(["slope_closed", repr(self.slope_closed)])
        w.writerow(["slope_search", repr(self.slope_search)])
        w.writerow(["minus_A_young", repr(-self.A_young)])
        w.writerow(["minus_A_alt", repr(-self.A_alt)])
        w.writerow(["B", repr(self.B)])
        w.writerow(["triples", self.triples])
        w.writerow(["violations", self.violations])
        return buf.getvalue()


def young_split_check(a1: float, a2: float | None = None, epsilons=None, trials: int = 20000,
                      triples: int = 10_000, seed: int = 0) -> YoungReport:
    """Fit the eps-exponent of the optimal Young constant two ways and stress the split.

    The closed form is confirmed by a seeded random search over X (log-uniform
    on a wide fixed range, Y = 1).  The split
    X^a1 Y^a2 <= eps X + C(eps) Y^B is then checked on random (X, Y, eps).
    """
    if not (0.0 < a1 < 1.0):
        raise DomainError(f"a1 must lie in (0, 1), got {a1}")
    if trials < 100:
        raise DomainError("need at least 100 random-search trials")
    a2 = 2.0 - a1 if a2 is None else a2
    A_alt, A_young, B = exponents.young_exponents(a1, a2)
    eps = np.logspace(-3, 0, 13) if epsilons is None else np.asarray(epsilons, dtype=float)
    if np.any(eps <= 0) or np.any(eps > 1):
        raise DomainError("epsilons must lie in (0, 1]")
    rng = np.random.default_rng(seed)

    c_closed = young_constant(a1, eps)
    logX = rng.uniform(-10.0, 60.0, size=trials) * np.log(10.0)
    X = np.exp(logX)
    c_search = np.array([np.max(X**a1 - e * X) for e in eps])

    loge = np.log(eps)
    slope_closed = float(np.polyfit(loge, np.log(c_closed), 1)[0])
    slope_search = float(np.polyfit(loge, np.log(c_search), 1)[0])

    Xs = 10.0 ** rng.uniform(-6, 6, size=triples)
    Ys = 10.0 ** rng.uniform(-3, 3, size=triples)
    Es = 10.0 ** rng.uniform(-3, 0, size=triples)
    lhs = Xs**a1 * Ys**a2
    rhs = Es * Xs + young_constant(a1, Es) * Ys**B
    violations = int(np.sum(lhs > rhs * (1.0 + 1e-12)))
    return YoungReport(
        a1, a2, B, A_alt, A_young, eps, c_closed, c_search, slope_closed, slope_search,
        triples, violations, float(np.max(lhs / rhs)), young_prefactor(a1),
    )
