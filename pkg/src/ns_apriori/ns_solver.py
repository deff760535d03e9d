"""Stationary Stokes / Navier-Stokes on the unit cube, no-slip walls.

Marker-and-cell layout on ``N = n - 1`` cells per axis: the x-velocity lives
on x-faces ``(i h, (j+1/2) h, (k+1/2) h)`` with shape (N+1, N, N), and
similarly for the other two components; pressure lives at cell centres.
Normal velocities on the walls are zero by construction; tangential no-slip
enters through ghost values mirrored across the wall.

The Stokes system is solved by conjugate gradients on the pressure Schur
complement (an accelerated Uzawa iteration).  Each Schur application needs
one vector Laplacian solve; the default path diagonalises the discrete
Laplacian with sine transforms, the ``"cg"`` path runs conjugate gradients.
Navier-Stokes is handled by damped Picard iteration, moving the convective
term to the right-hand side.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.fft as sfft
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import InvalidFieldError, LinearSolverStall, NonlinearDivergence, PreconditionError
from .function_spaces import (
    Grid,
    ScalarField,
    VectorField,
    derivative_array,
    lq_norm,
    sobolev_norm,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SolverConfig:
    tol: float = 1e-8
    max_picard: int = 200
    damping: float = 1.0
    inner_tol: float = 1e-10
    div_tol: float = 1e-8
    max_uzawa: int = 1000
    poisson: str = "fst"

    def __post_init__(self):
        if min(self.tol, self.inner_tol, self.div_tol) <= 0:
            raise ValueError("tolerances must be positive")
        if not (0.0 < self.damping <= 1.0):
            raise ValueError(f"damping must lie in (0, 1], got {self.damping}")
        if self.max_picard < 1 or self.max_uzawa < 1:
            raise ValueError("iteration caps must be positive")
        if self.poisson not in ("fst", "cg"):
            raise ValueError(f"unknown Poisson path {self.poisson!r}")


def face_shapes(N: int):
    return ((N + 1, N, N), (N, N + 1, N), (N, N, N + 1))


@dataclass(frozen=True, eq=False)
class StaggeredField:
    """Face-centred vector field; component ``c`` is normal to axis ``c``."""

    grid: Grid
    comps: tuple

    def __post_init__(self):
        N = self.grid.n - 1
        comps = []
        for c, shape in zip(self.comps, face_shapes(N)):
            arr = np.array(c, dtype=float, copy=True)
            if arr.shape != shape:
                raise InvalidFieldError(f"face array of shape {arr.shape}, expected {shape}")
            if not np.all(np.isfinite(arr)):
                raise InvalidFieldError("staggered field contains non-finite values")
            arr.setflags(write=False)
            comps.append(arr)
        if len(comps) != 3:
            raise InvalidFieldError("staggered field needs three components")
        object.__setattr__(self, "comps", tuple(comps))

    @classmethod
    def zeros(cls, grid: Grid) -> "StaggeredField":
        return cls(grid, tuple(np.zeros(s) for s in face_shapes(grid.n - 1)))

    @classmethod
    def from_function(cls, grid: Grid, func) -> "StaggeredField":
        """Sample component ``c`` of ``func(x, y, z)`` at the faces normal to axis ``c``."""
        comps = []
        for c in range(3):
            x, y, z = face_coords(grid, c)
            comps.append(np.broadcast_to(np.asarray(func(x, y, z)[c], float), x.shape))
        return cls(grid, tuple(comps))

    def __add__(self, other):
        return StaggeredField(self.grid, tuple(a + b for a, b in zip(self.comps, other.comps)))

    def __sub__(self, other):
        return StaggeredField(self.grid, tuple(a - b for a, b in zip(self.comps, other.comps)))

    def __mul__(self, lam):
        return StaggeredField(self.grid, tuple(lam * a for a in self.comps))

    __rmul__ = __mul__

    def sup(self) -> float:
        return max(float(np.max(np.abs(a))) for a in self.comps)

    def to_nodes(self, wall_zero: bool = False) -> VectorField:
        return VectorField(self.grid, np.stack([_face_to_nodes(a, c, wall_zero) for c, a in enumerate(self.comps)]))


def face_coords(grid: Grid, c: int):
    N, h = grid.n - 1, grid.h
    axes = []
    for ax in range(3):
        if ax == c:
            axes.append(np.arange(N + 1) * h)
        else:
            axes.append((np.arange(N) + 0.5) * h)
    return np.meshgrid(*axes, indexing="ij")


def cell_coords(grid: Grid):
    x = (np.arange(grid.n - 1) + 0.5) * grid.h
    return np.meshgrid(x, x, x, indexing="ij")


# ---------------------------------------------------------------------------
# transfers between node, face and cell layouts
# ---------------------------------------------------------------------------


def _avg(a, axis):
    a = np.moveaxis(a, axis, 0)
    return np.moveaxis(0.5 * (a[1:] + a[:-1]), 0, axis)


def _lagrange_rows(points: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """Cubic Lagrange weights from the four points nearest each target."""
    P = np.zeros((len(targets), len(points)))
    for j, t in enumerate(targets):
        lo = int(np.clip(np.searchsorted(points, t) - 2, 0, len(points) - 4))
        pts = points[lo : lo + 4]
        for a in range(4):
            others = np.delete(pts, a)
            P[j, lo + a] = np.prod((t - others) / (pts[a] - others))
    return P


@lru_cache(maxsize=16)
def _cell_to_node_matrix(N: int, wall_zero: bool = False) -> np.ndarray:
    """Cubic Lagrange map from N cell-centred samples to N+1 node values.

    Each node uses the four nearest data points (one-sided near the walls), so
    the recovered nodal field is O(h^4) close to a smooth interpolant and its
    discrete second derivatives stay consistent up to the boundary.  With
    ``wall_zero`` the wall values 0 join the data, so wall nodes are exactly 0.
    """
    centres = np.arange(N) + 0.5
    nodes = np.arange(N + 1.0)
    if not wall_zero:
        P = _lagrange_rows(centres, nodes)
    else:
        pts = np.concatenate([[0.0], centres, [float(N)]])
        P = _lagrange_rows(pts, nodes)[:, 1:-1]
    P.setflags(write=False)
    return P


def _cells_to_nodes_axis(a: np.ndarray, axis: int, wall_zero: bool = False) -> np.ndarray:
    P = _cell_to_node_matrix(a.shape[axis], wall_zero)
    return np.moveaxis(np.tensordot(P, np.moveaxis(a, axis, 0), axes=1), 0, axis)


def _face_to_nodes(a: np.ndarray, c: int, wall_zero: bool = False) -> np.ndarray:
    # The normal axis is node aligned already; tangential axes are cell
    # centred.  By default tangential wall nodes are extrapolated (O(h^4) from
    # zero); pinning them to zero lowers the error but delays the asymptotic
    # order on 8-cell grids, see the solver notes.
    out = a
    for ax in range(3):
        if ax != c:
            out = _cells_to_nodes_axis(out, ax, wall_zero)
    return out


def nodes_to_faces(f: VectorField) -> StaggeredField:
    comps = []
    for c in range(3):
        a = f.values[c]
        for ax in range(3):
            if ax != c:
                a = _avg(a, ax)
        comps.append(a)
    return StaggeredField(f.grid, tuple(comps))


def cells_to_nodes(p: np.ndarray) -> np.ndarray:
    out = p
    for ax in range(3):
        out = _cells_to_nodes_axis(out, ax)
    return out


# ---------------------------------------------------------------------------
# discrete operators
# ---------------------------------------------------------------------------


def _lap_axis(a: np.ndarray, axis: int, h: float, normal: bool) -> np.ndarray:
    """Second difference along one axis with wall conditions folded in."""
    a = np.moveaxis(a, axis, 0)
    out = np.zeros_like(a)
    if normal:
        # node-aligned: end entries are wall values (zero) and stay untouched
        out[1:-1] = (a[2:] - 2 * a[1:-1] + a[:-2]) / h**2
    else:
        ext = np.concatenate([-a[:1], a, -a[-1:]])
        out = (ext[2:] - 2 * ext[1:-1] + ext[:-2]) / h**2
    return np.moveaxis(out, 0, axis)


def laplacian(v: StaggeredField) -> StaggeredField:
    h = v.grid.h
    comps = []
    for c, a in enumerate(v.comps):
        lap = sum(_lap_axis(a, ax, h, ax == c) for ax in range(3))
        comps.append(_zero_walls(lap, c))
    return StaggeredField(v.grid, tuple(comps))


def _zero_walls(a, c):
    a = np.array(a)
    idx = [slice(None)] * 3
    idx[c] = 0
    a[tuple(idx)] = 0.0
    idx[c] = -1
    a[tuple(idx)] = 0.0
    return a


def gradient(p: np.ndarray, grid: Grid) -> StaggeredField:
    h = grid.h
    comps = []
    for c in range(3):
        d = np.diff(p, axis=c) / h
        pad = [(0, 0)] * 3
        pad[c] = (1, 1)
        comps.append(np.pad(d, pad))
    return StaggeredField(grid, tuple(comps))


def divergence(v: StaggeredField) -> np.ndarray:
    h = v.grid.h
    return sum(np.diff(a, axis=c) / h for c, a in enumerate(v.comps))


def max_divergence(v: StaggeredField) -> float:
    return float(np.max(np.abs(divergence(v))))


def inner(a: StaggeredField, b: StaggeredField) -> float:
    h3 = a.grid.h**3
    return float(sum(np.sum(x * y) for x, y in zip(a.comps, b.comps)) * h3)


def dirichlet_form(a: StaggeredField, b: StaggeredField) -> float:
    """Sum over components i and axes k of the discrete (d_k a_i, d_k b_i).

    Differences toward a tangential wall use the ghost value, i.e. a
    one-sided difference over half a cell, weighted by half a cell volume.
    """
    h = a.grid.h
    total = 0.0
    for c in range(3):
        for ax in range(3):
            x = np.moveaxis(a.comps[c], ax, 0)
            y = np.moveaxis(b.comps[c], ax, 0)
            dx, dy = np.diff(x, axis=0) / h, np.diff(y, axis=0) / h
            total += np.sum(dx * dy)
            if ax != c:
                total += 0.5 * np.sum((2 * x[0] / h) * (2 * y[0] / h))
                total += 0.5 * np.sum((2 * x[-1] / h) * (2 * y[-1] / h))
    return float(total * h**3)


def discrete_curl(a1: np.ndarray, a2: np.ndarray, a3: np.ndarray, grid: Grid) -> StaggeredField:
    """Curl of an edge-centred potential; exactly divergence free on the MAC grid.

    Shapes: ``a1`` (N, N+1, N+1), ``a2`` (N+1, N, N+1), ``a3`` (N+1, N+1, N).
    """
    h = grid.h
    u = np.diff(a3, axis=1) / h - np.diff(a2, axis=2) / h
    v = np.diff(a1, axis=2) / h - np.diff(a3, axis=0) / h
    w = np.diff(a2, axis=0) / h - np.diff(a1, axis=1) / h
    return StaggeredField(grid, (u, v, w))


def edge_coords(grid: Grid, c: int):
    """Node positions along every axis except ``c``, where edges are centred."""
    N, h = grid.n - 1, grid.h
    axes = [(np.arange(N) + 0.5) * h if ax == c else np.arange(N + 1) * h for ax in range(3)]
    return np.meshgrid(*axes, indexing="ij")


def random_solenoidal(grid: Grid, seed: int, modes: int = 3) -> StaggeredField:
    """Discrete curl of a random smooth potential that vanishes on the walls."""
    rng = np.random.default_rng(seed)
    pots = []
    for c in range(3):
        x, y, z = edge_coords(grid, c)
        bubble = (x * (1 - x) * y * (1 - y) * z * (1 - z)) ** 2 * 64.0**2
        val = np.zeros_like(x)
        for _ in range(modes):
            k = rng.integers(0, 3, size=3)
            ph = rng.uniform(0, 2 * np.pi, size=3)
            amp = rng.normal()
            val += amp * np.cos(np.pi * k[0] * x + ph[0]) * np.cos(np.pi * k[1] * y + ph[1]) * np.cos(
                np.pi * k[2] * z + ph[2]
            )
        pots.append(bubble * val)
    return discrete_curl(*pots, grid)


# ---------------------------------------------------------------------------
# vector Laplacian solves
# ---------------------------------------------------------------------------


@lru_cache(maxsize=8)
def _fst_symbols(N: int, h: float):
    lam_node = (2 - 2 * np.cos(np.pi * np.arange(1, N) / N)) / h**2
    lam_cell = (2 - 2 * np.cos(np.pi * np.arange(1, N + 1) / N)) / h**2
    out = []
    for c in range(3):
        lams = [lam_node if ax == c else lam_cell for ax in range(3)]
        sym = lams[0][:, None, None] + lams[1][None, :, None] + lams[2][None, None, :]
        sym.setflags(write=False)
        out.append(sym)
    return tuple(out)


def _fst_solve(r: np.ndarray, c: int, nu: float, h: float) -> np.ndarray:
    """Solve -nu*Lap u = r for the interior unknowns of component c."""
    N = r.shape[(c + 1) % 3]
    sym = _fst_symbols(N, h)[c]
    idx = [slice(None)] * 3
    idx[c] = slice(1, -1)
    rhat = r[tuple(idx)]
    for ax in range(3):
        rhat = sfft.dst(rhat, type=1 if ax == c else 2, axis=ax, norm="ortho")
    rhat = rhat / (nu * sym)
    for ax in range(3):
        rhat = sfft.idst(rhat, type=1 if ax == c else 2, axis=ax, norm="ortho")
    out = np.zeros_like(r)
    out[tuple(idx)] = rhat
    return out


@lru_cache(maxsize=8)
def _sparse_laplacians(N: int, h: float):
    def tri(m, ends):
        main = np.full(m, 2.0)
        main[0] += ends
        main[-1] += ends
        off = -np.ones(m - 1)
        return sp.diags([off, main, off], [-1, 0, 1], format="csr") / h**2

    node, cell = tri(N - 1, 0.0), tri(N, 1.0)
    out = []
    for c in range(3):
        ops = [node if ax == c else cell for ax in range(3)]
        eyes = [sp.identity(o.shape[0], format="csr") for o in ops]
        K = (
            sp.kron(sp.kron(ops[0], eyes[1]), eyes[2])
            + sp.kron(sp.kron(eyes[0], ops[1]), eyes[2])
            + sp.kron(sp.kron(eyes[0], eyes[1]), ops[2])
        )
        out.append(K.tocsr())
    return tuple(out)


def _cg_solve(r: np.ndarray, c: int, nu: float, h: float, tol: float) -> np.ndarray:
    N = r.shape[(c + 1) % 3]
    K = _sparse_laplacians(N, h)[c]
    idx = [slice(None)] * 3
    idx[c] = slice(1, -1)
    rhs = r[tuple(idx)]
    shape = rhs.shape
    if not np.any(rhs):
        return np.zeros_like(r)
    x, info = spla.cg(nu * K, rhs.ravel(), rtol=tol * 1e-3, atol=0.0, maxiter=20 * N**2)
    if info != 0:
        res = np.max(np.abs(nu * K @ x - rhs.ravel()))
        raise LinearSolverStall("velocity CG did not converge", res)
    out = np.zeros_like(r)
    out[tuple(idx)] = x.reshape(shape)
    return out


def solve_vector_laplacian(r: StaggeredField, nu: float, cfg: SolverConfig) -> StaggeredField:
    h = r.grid.h
    if cfg.poisson == "fst":
        comps = [_fst_solve(a, c, nu, h) for c, a in enumerate(r.comps)]
    else:
        comps = [_cg_solve(a, c, nu, h, cfg.inner_tol) for c, a in enumerate(r.comps)]
    return StaggeredField(r.grid, tuple(comps))


# ---------------------------------------------------------------------------
# Stokes
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FlowState:
    grid: Grid
    velocity: StaggeredField
    pressure: np.ndarray
    nu: float = 1.0
    trace: list = field(default_factory=list)

    def __post_init__(self):
        p = np.array(self.pressure, dtype=float, copy=True)
        p.setflags(write=False)
        object.__setattr__(self, "pressure", p)

    def velocity_nodes(self) -> VectorField:
        return self.velocity.to_nodes()

    def pressure_nodes(self) -> ScalarField:
        return ScalarField(self.grid, cells_to_nodes(self.pressure))

    def pressure_gradient_nodes(self) -> VectorField:
        pn = cells_to_nodes(self.pressure)
        h = self.grid.h
        betas = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
        return VectorField(self.grid, np.stack([derivative_array(pn, b, h) for b in betas]))

    def max_divergence(self) -> float:
        return max_divergence(self.velocity)

    def pressure_mean(self) -> float:
        return float(np.mean(self.pressure))


def _as_faces(g, grid: Grid | None = None) -> StaggeredField:
    if isinstance(g, StaggeredField):
        return g
    if isinstance(g, VectorField):
        return nodes_to_faces(g)
    raise InvalidFieldError(f"forcing must be a VectorField or StaggeredField, got {type(g).__name__}")


def stokes_residual(state: FlowState, g) -> float:
    """Sup norm of -nu*Lap v + grad p - g over interior faces."""
    gf = _as_faces(g)
    r = (-state.nu) * laplacian(state.velocity) + gradient(state.pressure, state.grid) - gf
    return StaggeredField(state.grid, tuple(_zero_walls(a, c) for c, a in enumerate(r.comps))).sup()


def solve_stokes(g, nu: float, grid: Grid | None = None, cfg: SolverConfig = SolverConfig()) -> FlowState:
    """Solve -nu*Lap v + grad p = g, div v = 0, v = 0 on the walls.

    ``g`` is either a nodal VectorField (averaged onto faces) or a
    StaggeredField already sampled on faces.
    """
    if nu <= 0:
        raise ValueError(f"viscosity must be positive, got {nu}")
    gf = _as_faces(g)
    grid = gf.grid if grid is None else grid
    if gf.grid != grid:
        raise InvalidFieldError("forcing grid does not match solver grid")
    gf = StaggeredField(grid, tuple(_zero_walls(a, c) for c, a in enumerate(gf.comps)))

    def A_inv(r):
        return solve_vector_laplacian(r, nu, cfg)

    u0 = A_inv(gf)
    # conjugate gradients for S p = -div u0, S = -div A^{-1} grad, on mean-zero p
    p = np.zeros((grid.n - 1,) * 3)
    u = u0
    res = divergence(u)
    res -= res.mean()
    r = -res
    target = 0.5 * cfg.div_tol
    if np.max(np.abs(res)) <= target:
        return FlowState(grid, u, p, nu)
    z = nu * r
    d = z.copy()
    rz = float(np.sum(r * z))
    Agrad_d = None
    for it in range(1, cfg.max_uzawa + 1):
        Agrad_d = A_inv(gradient(d, grid))
        Sd = -divergence(Agrad_d)
        Sd -= Sd.mean()
        curv = float(np.sum(d * Sd))
        if not (curv > 0.0 and math.isfinite(curv)):
            raise LinearSolverStall("Schur complement CG broke down", float(np.max(np.abs(r))))
        step = rz / curv
        p = p + step * d
        u = u - step * Agrad_d
        r = r - step * Sd
        if it % 25 == 0:
            # refresh the recursive residual against the true divergence
            r = -divergence(u)
            r -= r.mean()
        if np.max(np.abs(r)) <= target:
            break
        z = nu * r
        rz_new = float(np.sum(r * z))
        d = z + (rz_new / rz) * d
        rz = rz_new
    else:
        raise LinearSolverStall("Schur complement CG hit its iteration cap", float(np.max(np.abs(r))))
    p = p - p.mean()
    state = FlowState(grid, u, p, nu)
    div = state.max_divergence()
    if div > cfg.div_tol:
        raise LinearSolverStall("divergence above tolerance after Schur CG", div)
    mom = stokes_residual(state, gf)
    if mom > cfg.inner_tol * (1.0 + gf.sup()):
        raise LinearSolverStall("momentum residual above tolerance", mom)
    log.debug("stokes solve: %d Schur iterations, div %.2e, momentum %.2e", it, div, mom)
    return state


# ---------------------------------------------------------------------------
# Navier-Stokes
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FluidProblem:
    nu: float
    forcing: VectorField

    def __post_init__(self):
        if not self.nu > 0:
            raise ValueError(f"viscosity must be positive, got {self.nu}")
        if not isinstance(self.forcing, VectorField):
            raise InvalidFieldError("forcing must be a nodal VectorField")

    @property
    def grid(self) -> Grid:
        return self.forcing.grid


def advect(v: VectorField) -> VectorField:
    """Convective term (v . grad) v on nodes, componentwise."""
    h = v.grid.h
    betas = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    out = np.zeros_like(v.values)
    for i in range(3):
        for l, b in enumerate(betas):
            out[i] += v.values[l] * derivative_array(v.values[i], b, h)
    return VectorField(v.grid, out)


def convective_faces(v: StaggeredField) -> StaggeredField:
    return nodes_to_faces(advect(v.to_nodes()))


def ns_residual(state: FlowState, f) -> float:
    """Sup norm of the full discrete momentum residual (including convection)."""
    ff = _as_faces(f)
    return stokes_residual(state, ff - convective_faces(state.velocity))


@dataclass(frozen=True)
class TraceRow:
    iter: int
    update_sup: float
    residual_sup: float
    div_max: float


def solve_navier_stokes(prob: FluidProblem, cfg: SolverConfig = SolverConfig()) -> FlowState:
    """Damped Picard iteration v <- (1-theta) v + theta * Stokes(f - (v.grad)v)."""
    grid, nu = prob.grid, prob.nu
    ff = nodes_to_faces(prob.forcing)
    bound = 10 * cfg.inner_tol * (1.0 + ff.sup())
    v = StaggeredField.zeros(grid)
    p = np.zeros((grid.n - 1,) * 3)
    conv = StaggeredField.zeros(grid)
    trace: list[TraceRow] = []
    theta = cfg.damping
    for it in range(1, cfg.max_picard + 1):
        try:
            step = solve_stokes(ff - conv, nu, grid, cfg)
        except LinearSolverStall as exc:
            raise NonlinearDivergence(f"inner Stokes solve failed at Picard iteration {it}: {exc}", trace) from exc
        v_new = (1 - theta) * v + theta * step.velocity
        p_new = (1 - theta) * p + theta * step.pressure
        update = (v_new - v).sup()
        if not np.isfinite(update) or update > 1e6:
            trace.append(TraceRow(it, update, float("nan"), float("nan")))
            raise NonlinearDivergence(f"Picard update reached {update:.3e} at iteration {it}", trace)
        v, p = v_new, p_new
        conv = convective_faces(v)
        state = FlowState(grid, v, p, nu)
        resid = stokes_residual(state, ff - conv)
        trace.append(TraceRow(it, update, resid, state.max_divergence()))
        if update < cfg.tol and resid <= bound:
            return FlowState(grid, v, p, nu, trace)
    raise NonlinearDivergence(f"Picard iteration did not converge in {cfg.max_picard} steps", trace)


# ---------------------------------------------------------------------------
# weak form and energy
# ---------------------------------------------------------------------------


def weak_residual(state: FlowState, f, eta: StaggeredField, div_tol: float = 1e-8) -> float:
    """|nu (grad v, grad eta) + ((v.grad)v, eta) - (f, eta)| for a solenoidal test field."""
    if not isinstance(eta, StaggeredField) or eta.grid != state.grid:
        raise PreconditionError("test field must be a staggered field on the state's grid")
    if max_divergence(eta) > div_tol:
        raise PreconditionError("test field is not discretely divergence free")
    for c, a in enumerate(eta.comps):
        idx = [slice(None)] * 3
        idx[c] = 0
        lo = a[tuple(idx)]
        idx[c] = -1
        hi = a[tuple(idx)]
        if np.any(lo) or np.any(hi):
            raise PreconditionError("test field does not vanish on the walls")
    ff = _as_faces(f)
    lhs = state.nu * dirichlet_form(state.velocity, eta) + inner(convective_faces(state.velocity), eta)
    return abs(lhs - inner(ff, eta))


def energy_check(state: FlowState, f: VectorField, tiny: float = 1e-300) -> tuple[float, float]:
    """(||v||_{W^1_2} / ||f||_2, ||v||_6 / ||v||_{W^1_2}), zero by convention for v = 0."""
    v = state.velocity_nodes()
    w12 = sobolev_norm(v, 1, 2.0)
    if w12 == 0.0:
        return 0.0, 0.0
    return w12 / max(lq_norm(f, 2.0), tiny), lq_norm(v, 6.0) / w12
