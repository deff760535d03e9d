"""Body forces used by the sweeps and the command line.

``manufactured`` forcing has a known Navier-Stokes solution: the velocity is
``amplitude`` times a wall-compatible field with componentwise sup 1.  Its
data are compatible with the cube's edges and corners, so the Hölder norms of
the discrete solutions converge under refinement.  ``trig`` and ``bump`` are
generic smooth forces; their solutions carry the weak edge/corner
singularities of the cube, which makes C^(2+alpha) norms drift with the mesh.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import sympy as sy

from .errors import DomainError
from .function_spaces import Grid, VectorField
from .manufactured import manufactured
from .ns_solver import StaggeredField

FORCING_KINDS = ("trig", "bump", "manufactured")

# 768*sqrt(3) makes every velocity component of the manufactured field have sup 1
MANUFACTURED_SCALE = 768.0 * math.sqrt(3.0)
BUMP_WIDTH = 0.15


def _manufactured(nu: float, amplitude: float):
    # velocity sup and pressure size both scale with the amplitude
    return manufactured(nu, nonlinear=True, scale=MANUFACTURED_SCALE * amplitude, pressure_scale=amplitude)


@dataclass(frozen=True)
class ForcingSpec:
    kind: str = "manufactured"
    amplitude: float = 1.0

    def __post_init__(self):
        if self.kind not in FORCING_KINDS:
            raise DomainError(f"forcing kind must be one of {FORCING_KINDS}, got {self.kind!r}")
        if not math.isfinite(self.amplitude):
            raise DomainError("forcing amplitude must be finite")

    def scaled(self, amplitude: float) -> "ForcingSpec":
        return ForcingSpec(self.kind, amplitude)

    def function(self, nu: float):
        a = self.amplitude
        if self.kind == "trig":
            def f(x, y, z):
                zero = np.zeros_like(x)
                return a * np.sin(2 * np.pi * y) + zero, zero, zero
        elif self.kind == "bump":
            def f(x, y, z):
                r2 = (x - 0.5) ** 2 + (y - 0.5) ** 2 + (z - 0.5) ** 2
                g = a * np.exp(-r2 / (2 * BUMP_WIDTH**2))
                return g, -g, g
        else:
            f = _manufactured(nu, a).forcing
        return f

    def nodes(self, grid: Grid, nu: float) -> VectorField:
        return VectorField.from_function(grid, self.function(nu))

    def exact_velocity(self, grid: Grid, nu: float) -> VectorField | None:
        if self.kind != "manufactured":
            return None
        vel = _manufactured(nu, self.amplitude).velocity
        return VectorField.from_function(grid, vel)


# ---------------------------------------------------------------------------
# Stokes data with a prescribed smooth solution
# ---------------------------------------------------------------------------


@lru_cache(maxsize=8)
def _axis_factor(k: int):
    """d^j/ds^j of 4 (s(1-s))^2 exp(i pi k s), j = 0..3, as numpy callables."""
    s = sy.symbols("s", real=True)
    q = 4 * (s * (1 - s)) ** 2 * sy.exp(sy.I * sy.pi * k * s)
    return [sy.lambdify(s, sy.diff(q, s, j), "numpy") for j in range(4)]


def _separable(terms, d, X):
    """sum of Re(c * prod_j q_kj^(d_j)(x_j)) over terms (c, k)."""
    out = np.zeros(np.shape(X[0]))
    for c, k in terms:
        prod = c * np.ones(np.shape(X[0]), dtype=complex)
        for axis in range(3):
            prod = prod * _axis_factor(int(k[axis]))[d[axis]](X[axis] + 0j)
        out += prod.real
    return out


def _unit(*pairs):
    d = [0, 0, 0]
    for axis, order in pairs:
        d[axis] += order
    return d


@lru_cache(maxsize=64)
def _prescribed_stokes(seed: int, nu: float, modes: int):
    """Random (w, phi) with w = curl(b^2 R) and g = -nu lap w + grad phi.

    R has random-Fourier components and b = 64 x(1-x) y(1-y) z(1-z), so w and
    its gradient vanish on the walls and div w = 0; phi is a random-Fourier
    scalar.  Each term of b^2 R is a separable complex product, so all
    derivatives reduce to one-dimensional ones.
    """
    rng = np.random.default_rng([seed, 7])

    def fourier():
        terms = []
        for _ in range(modes):
            k = tuple(int(v) for v in rng.integers(0, 3, size=3))
            ph = float(rng.uniform(0, 2 * np.pi))
            amp = float(rng.normal()) / (1.0 + sum(v * v for v in k))
            terms.append((amp * np.exp(1j * ph), k))
        return terms

    R = [fourier() for _ in range(3)]
    phi = fourier()
    # curl: w_i = d_j R_k - d_k R_j for cyclic (i, j, k)
    cyc = [(0, 1, 2), (1, 2, 0), (2, 0, 1)]

    def w(x, y, z):
        X = (x, y, z)
        return tuple(
            _separable(R[k], _unit((j, 1)), X) - _separable(R[j], _unit((k, 1)), X)
            for i, j, k in cyc
        )

    def g(x, y, z):
        X = (x, y, z)
        out = []
        for i, j, k in cyc:
            lap = 0.0
            for a in range(3):
                lap = lap + _separable(R[k], _unit((j, 1), (a, 2)), X)
                lap = lap - _separable(R[j], _unit((k, 1), (a, 2)), X)
            grad = np.zeros(np.shape(x))
            for c, kv in phi:
                theta = np.pi * (kv[0] * x + kv[1] * y + kv[2] * z)
                grad -= np.pi * kv[i] * (c * np.exp(1j * theta)).imag
            out.append(-nu * lap + grad)
        return tuple(out)

    return g, w


def prescribed_stokes_forcing(seed: int, nu: float = 1.0, modes: int = 3):
    """(g, w) callables of a seeded Stokes problem whose velocity is w."""
    return _prescribed_stokes(int(seed), float(nu), int(modes))


def prescribed_stokes_faces(grid: Grid, seed: int, nu: float = 1.0, modes: int = 3) -> StaggeredField:
    return StaggeredField.from_function(grid, prescribed_stokes_forcing(seed, nu, modes)[0])
