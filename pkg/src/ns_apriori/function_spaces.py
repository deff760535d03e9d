"""Discrete Hölder, Lebesgue and Sobolev norms on the unit cube.

Fields are sampled on a uniform node lattice over [0, 1]^3.  Arrays are
indexed ``values[i, j, k]`` with ``i`` running along x1; the flat row-major
layout used on disk (x fastest) is ``values.ravel(order="F")``.

Vector fields follow the componentwise convention: every norm of a vector
field is the sum of the norms of its three components.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Callable, NamedTuple, Sequence, Union

import numpy as np

from .errors import DomainError, InvalidFieldError, UnsupportedOrderError

DEFAULT_PAIR_BUDGET = 2_000_000
_CHUNK = 1 << 20


@dataclass(frozen=True)
class Grid:
    """Node lattice with ``n`` nodes per axis, ``n = 2**k + 1``."""

    n: int

    def __post_init__(self):
        n = self.n
        if not isinstance(n, (int, np.integer)) or n < 5:
            raise DomainError(f"grid needs at least 5 nodes per axis, got {n!r}")
        if (n - 1) & (n - 2):
            raise DomainError(f"nodes per axis must be 2**k + 1, got {n}")

    @property
    def h(self) -> float:
        return 1.0 / (self.n - 1)

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.n, self.n, self.n)

    @property
    def node_count(self) -> int:
        return self.n**3

    @property
    def coords(self) -> np.ndarray:
        return np.arange(self.n) * self.h

    def mesh(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        x = self.coords
        return np.meshgrid(x, x, x, indexing="ij")

    def refine(self) -> "Grid":
        return Grid(2 * self.n - 1)

    def trapezoid_weights(self) -> np.ndarray:
        w = np.full(self.n, self.h)
        w[0] = w[-1] = 0.5 * self.h
        return w[:, None, None] * w[None, :, None] * w[None, None, :]


def _frozen(values: np.ndarray) -> np.ndarray:
    arr = np.array(values, dtype=np.float64, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ScalarField:
    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        vals = _frozen(self.values)
        if vals.shape != self.grid.shape:
            raise InvalidFieldError(
                f"values of shape {vals.shape} do not match grid {self.grid.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise InvalidFieldError("field contains non-finite values")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, grid: Grid, func: Callable) -> "ScalarField":
        x, y, z = grid.mesh()
        vals = np.broadcast_to(np.asarray(func(x, y, z), dtype=float), grid.shape)
        return cls(grid, vals)

    @classmethod
    def zeros(cls, grid: Grid) -> "ScalarField":
        return cls(grid, np.zeros(grid.shape))

    def __add__(self, other: "ScalarField") -> "ScalarField":
        _same_grid(self, other)
        return ScalarField(self.grid, self.values + other.values)

    def __sub__(self, other: "ScalarField") -> "ScalarField":
        _same_grid(self, other)
        return ScalarField(self.grid, self.values - other.values)

    def __mul__(self, lam: float) -> "ScalarField":
        return ScalarField(self.grid, lam * self.values)

    __rmul__ = __mul__

    def __abs__(self) -> "ScalarField":
        return ScalarField(self.grid, np.abs(self.values))


@dataclass(frozen=True, eq=False)
class VectorField:
    """Three components sharing one grid; ``values`` has shape (3, n, n, n)."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        vals = _frozen(self.values)
        if vals.shape != (3, *self.grid.shape):
            raise InvalidFieldError(
                f"vector values of shape {vals.shape} do not match grid {self.grid.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise InvalidFieldError("field contains non-finite values")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_components(cls, comps: Sequence[ScalarField]) -> "VectorField":
        if len(comps) != 3:
            raise InvalidFieldError("a vector field needs exactly three components")
        grid = comps[0].grid
        for c in comps[1:]:
            _same_grid(comps[0], c)
        return cls(grid, np.stack([c.values for c in comps]))

    @classmethod
    def from_function(cls, grid: Grid, func: Callable) -> "VectorField":
        x, y, z = grid.mesh()
        comps = func(x, y, z)
        return cls(
            grid, np.stack([np.broadcast_to(np.asarray(c, float), grid.shape) for c in comps])
        )

    @classmethod
    def zeros(cls, grid: Grid) -> "VectorField":
        return cls(grid, np.zeros((3, *grid.shape)))

    @property
    def components(self) -> tuple[ScalarField, ScalarField, ScalarField]:
        return tuple(ScalarField(self.grid, c) for c in self.values)

    def __add__(self, other: "VectorField") -> "VectorField":
        _same_grid(self, other)
        return VectorField(self.grid, self.values + other.values)

    def __sub__(self, other: "VectorField") -> "VectorField":
        _same_grid(self, other)
        return VectorField(self.grid, self.values - other.values)

    def __mul__(self, lam: float) -> "VectorField":
        return VectorField(self.grid, lam * self.values)

    __rmul__ = __mul__


Field = Union[ScalarField, VectorField]


def _same_grid(a, b):
    if a.grid != b.grid:
        raise InvalidFieldError(f"grid mismatch: n={a.grid.n} vs n={b.grid.n}")


def _components(u: Field) -> tuple[ScalarField, ...]:
    if isinstance(u, VectorField):
        return u.components
    if isinstance(u, ScalarField):
        return (u,)
    raise InvalidFieldError(f"expected a ScalarField or VectorField, got {type(u).__name__}")


class MultiIndex(NamedTuple):
    b1: int
    b2: int
    b3: int

    @property
    def order(self) -> int:
        return self.b1 + self.b2 + self.b3


def multi_indices(order: int) -> list[MultiIndex]:
    """All multi-indices of the given total order, in lexicographic order (descending b1)."""
    out = [MultiIndex(*b) for b in product(range(order + 1), repeat=3) if sum(b) == order]
    return sorted(out, reverse=True)


# ---------------------------------------------------------------------------
# finite differences
# ---------------------------------------------------------------------------


def _d1(a: np.ndarray, axis: int, h: float) -> np.ndarray:
    # written on differences so that constants differentiate to exact zeros
    a = np.moveaxis(a, axis, 0)
    out = np.empty_like(a)
    out[1:-1] = (a[2:] - a[:-2]) / (2 * h)
    out[0] = (3 * (a[1] - a[0]) - (a[2] - a[1])) / (2 * h)
    out[-1] = (3 * (a[-1] - a[-2]) - (a[-2] - a[-3])) / (2 * h)
    return np.moveaxis(out, 0, axis)


def _d2(a: np.ndarray, axis: int, h: float) -> np.ndarray:
    a = np.moveaxis(a, axis, 0)
    out = np.empty_like(a)
    out[1:-1] = ((a[2:] - a[1:-1]) - (a[1:-1] - a[:-2])) / h**2
    out[0] = (2 * (a[0] - a[1]) - 3 * (a[1] - a[2]) + (a[2] - a[3])) / h**2
    out[-1] = (2 * (a[-1] - a[-2]) - 3 * (a[-2] - a[-3]) + (a[-3] - a[-4])) / h**2
    return np.moveaxis(out, 0, axis)


def derivative_array(values: np.ndarray, beta: Sequence[int], h: float) -> np.ndarray:
    """Apply D^beta to the trailing three axes of ``values``."""
    beta = tuple(int(b) for b in beta)
    if len(beta) != 3 or min(beta) < 0:
        raise DomainError(f"bad multi-index {beta}")
    if sum(beta) > 2:
        raise UnsupportedOrderError(f"derivative order {sum(beta)} exceeds 2")
    out = values
    lead = values.ndim - 3
    for ax, b in enumerate(beta):
        if b == 1:
            out = _d1(out, lead + ax, h)
        elif b == 2:
            out = _d2(out, lead + ax, h)
    return out


def derivative(u: Field, beta: Sequence[int]) -> Field:
    """Second-order finite-difference D^beta (central inside, one-sided on faces).

    Mixed derivatives are composed in the order x1, x2, x3.  The scheme is
    exact on polynomials of total degree at most two.
    """
    vals = derivative_array(u.values, beta, u.grid.h)
    return type(u)(u.grid, vals)


# ---------------------------------------------------------------------------
# sup norm and Hölder seminorm
# ---------------------------------------------------------------------------


def sup_norm(u: Field) -> float:
    return float(sum(np.max(np.abs(c.values)) for c in _components(u)))


def axis_pair_count(shape: Sequence[int]) -> int:
    """Number of unordered node pairs lying on a common grid line."""
    total = 0
    for ax, n in enumerate(shape):
        lines = int(np.prod(shape)) // n
        total += lines * n * (n - 1) // 2
    return total


def _offset_slices(offset, shape):
    a, b = [], []
    for o, n in zip(offset, shape):
        if o >= 0:
            a.append(slice(0, n - o))
            b.append(slice(o, n))
        else:
            a.append(slice(-o, n))
            b.append(slice(0, n + o))
    return tuple(a), tuple(b)


def _axis_scan(w: np.ndarray, alpha: float, h: float) -> float:
    best = 0.0
    for ax, n in enumerate(w.shape):
        for k in range(1, n):
            off = [0, 0, 0]
            off[ax] = k
            sa, sb = _offset_slices(off, w.shape)
            diff = np.max(np.abs(w[sb] - w[sa]))
            best = max(best, diff / (k * h) ** alpha)
    return float(best)


@lru_cache(maxsize=4)
def _pair_weights(shape: tuple, alpha: float, h: float) -> np.ndarray:
    """|x - y|^(-alpha) for all node pairs of a box, zero on the diagonal."""
    idx = np.stack(np.unravel_index(np.arange(int(np.prod(shape))), shape), axis=1).astype(float)
    d2 = np.sum((idx[:, None, :] - idx[None, :, :]) ** 2, axis=2)
    d2[d2 == 0] = np.inf
    wts = (h * np.sqrt(d2)) ** (-alpha)
    wts.setflags(write=False)
    return wts


def _exhaustive_scan(w: np.ndarray, alpha: float, h: float) -> float:
    flat = w.ravel()
    wts = _pair_weights(w.shape, alpha, h)
    rows = max(1, _CHUNK // flat.size)
    best = 0.0
    for s in range(0, flat.size, rows):
        num = np.abs(flat[s : s + rows, None] - flat[None, :])
        best = max(best, float(np.max(num * wts[s : s + rows])))
    return best


@lru_cache(maxsize=16)
def _random_pairs(n: int, count: int, seed: int):
    rng = np.random.default_rng(seed)
    m = n**3
    i = rng.integers(0, m, size=count)
    j = rng.integers(0, m, size=count)
    keep = i != j
    i, j = i[keep], j[keep]
    # flat index in C order of the (n, n, n) array
    ci = np.stack(np.unravel_index(i, (n, n, n)))
    cj = np.stack(np.unravel_index(j, (n, n, n)))
    dist_idx = np.sqrt(np.sum((ci - cj) ** 2, axis=0).astype(float))
    i.setflags(write=False)
    j.setflags(write=False)
    dist_idx.setflags(write=False)
    return i, j, dist_idx


def _random_scan(w: np.ndarray, alpha: float, h: float, count: int, seed: int) -> float:
    i, j, dist_idx = _random_pairs(w.shape[0], count, seed)
    flat = w.ravel()
    best = 0.0
    for s in range(0, len(i), _CHUNK):
        e = s + _CHUNK
        num = np.abs(flat[i[s:e]] - flat[j[s:e]])
        best = max(best, float(np.max(num / (h * dist_idx[s:e]) ** alpha, initial=0.0)))
    return best


def _support_box(w: np.ndarray):
    nz = np.nonzero(w)
    if len(nz[0]) == 0:
        return None
    box = []
    for idx, n in zip(nz, w.shape):
        box.append(slice(max(int(idx.min()) - 1, 0), min(int(idx.max()) + 2, n)))
    return tuple(box)


def _scalar_seminorm(w: np.ndarray, alpha: float, h: float, pair_budget: int, seed: int) -> float:
    box = _support_box(w)
    if box is None:
        return 0.0
    # Pairs with both nodes off the support contribute nothing, and any node
    # outside the one-node-padded support box can be swapped for its
    # projection onto the box face, which is a zero node at least as close.
    # So an exhaustive scan of the box equals an exhaustive scan of the grid.
    sub = w[box]
    if sub.size**2 <= pair_budget:
        return _exhaustive_scan(sub, alpha, h)
    best = _axis_scan(w, alpha, h)
    extra = pair_budget - axis_pair_count(w.shape)
    if extra > 0:
        best = max(best, _random_scan(w, alpha, h, extra, seed))
    return best


def _check_alpha(alpha: float):
    if not (0.0 < alpha < 1.0):
        raise DomainError(f"Hölder exponent must lie in (0, 1), got {alpha}")


def holder_seminorm(
    u: Field, alpha: float, pair_budget: int = DEFAULT_PAIR_BUDGET, seed: int = 0
) -> float:
    """Discrete Hölder seminorm, a lower bound of the continuum seminorm.

    When ``node_count**2 <= pair_budget`` (counted over the padded bounding
    box of the field's support) every node pair is scanned.  Otherwise all
    axis-aligned pairs are scanned exhaustively and the remaining budget is
    spent on a seeded uniform sample of general pairs.  The pair set depends
    only on the grid, budget and seed.
    """
    _check_alpha(alpha)
    comps = _components(u)
    n = comps[0].grid.n
    if pair_budget < 3 * n * n * (n - 1):
        raise DomainError(
            f"pair_budget {pair_budget} is below the axis nearest-neighbour count"
        )
    return float(
        sum(_scalar_seminorm(c.values, alpha, c.grid.h, pair_budget, seed) for c in comps)
    )


# ---------------------------------------------------------------------------
# assembled norms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NormReport:
    m: int
    alpha: float
    sup_norms: tuple[float, ...]
    holder_seminorm: float
    c_norm: float
    holder_terms: dict = field(default_factory=dict)
    q: float | None = None
    lq_norm: float | None = None
    sobolev_norm: float | None = None
    pair_budget: int = DEFAULT_PAIR_BUDGET
    seed: int = 0

    def as_row(self) -> dict:
        row = {"m": self.m, "alpha": self.alpha}
        for k, s in enumerate(self.sup_norms):
            row[f"sup_order{k}"] = s
        row["holder_top"] = self.holder_seminorm
        row["c_norm"] = self.c_norm
        row["q"] = self.q
        row["lq_norm"] = self.lq_norm
        row["sobolev_norm"] = self.sobolev_norm
        row["pair_budget"] = self.pair_budget
        row["seed"] = self.seed
        return row


def _check_m(m: int):
    if m not in (0, 1, 2):
        raise UnsupportedOrderError(f"norm order m must be 0, 1 or 2, got {m}")


def c_norm(
    u: Field,
    m: int,
    alpha: float,
    pair_budget: int = DEFAULT_PAIR_BUDGET,
    seed: int = 0,
    q: float | None = None,
) -> NormReport:
    """Hölder norm |u|^(m+alpha): sup norms of D^beta for |beta| <= m plus
    Hölder seminorms of the order-m derivatives.  Pass ``q`` to also fill the
    L_q and W^m_q entries of the report."""
    _check_m(m)
    _check_alpha(alpha)
    sups = []
    terms = {}
    seminorm = 0.0
    for k in range(m + 1):
        total = 0.0
        for beta in multi_indices(k):
            d = derivative(u, beta)
            total += sup_norm(d)
            if k == m:
                t = holder_seminorm(d, alpha, pair_budget, seed)
                terms[tuple(beta)] = t
                seminorm += t
        sups.append(total)
    lq = sob = None
    if q is not None:
        lq = lq_norm(u, q)
        sob = sobolev_norm(u, m, q)
    return NormReport(
        m=m,
        alpha=alpha,
        sup_norms=tuple(sups),
        holder_seminorm=seminorm,
        c_norm=sum(sups) + seminorm,
        holder_terms=terms,
        q=q,
        lq_norm=lq,
        sobolev_norm=sob,
        pair_budget=pair_budget,
        seed=seed,
    )


def integer_norm(u: Field, m: int) -> float:
    """|u|^(m): sum of sup norms of all derivatives of order <= m."""
    _check_m(m)
    return float(sum(sup_norm(derivative(u, b)) for k in range(m + 1) for b in multi_indices(k)))


def lq_norm(u: Field, q: float) -> float:
    """Trapezoidal L_q norm over the unit cube."""
    if not q > 1:
        raise DomainError(f"L_q norm needs q > 1, got {q}")
    total = 0.0
    for c in _components(u):
        w = c.grid.trapezoid_weights()
        a = np.abs(c.values)
        scale = a.max()
        if scale == 0.0:
            continue
        # factor out the max so |u|**q cannot overflow or underflow
        total += scale * float(np.sum(w * (a / scale) ** q)) ** (1.0 / q)
    return total


def sobolev_norm(u: Field, m: int, q: float) -> float:
    """W^m_q norm: sum of L_q norms of D^beta over |beta| <= m."""
    _check_m(m)
    return float(
        sum(lq_norm(derivative(u, b), q) for k in range(m + 1) for b in multi_indices(k))
    )
