"""Manufactured solutions for the Stokes and Navier-Stokes solvers.

Velocity is the curl of (0, 0, psi) with psi = [x(1-x) y(1-y) z(1-z)]^2,
which is divergence free and vanishes with its gradient on every wall.
Pressure is sin(pi x) cos(pi y), whose mean over the cube is already zero.
The forcing is obtained by symbolic differentiation.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
import sympy as sy

from .function_spaces import Grid, VectorField, lq_norm
from .ns_solver import (
    FluidProblem,
    SolverConfig,
    StaggeredField,
    solve_navier_stokes,
    solve_stokes,
)


@lru_cache(maxsize=8)
def _symbolic(nu: float, scale: float, nonlinear: bool, pressure_scale: float):
    x, y, z = sy.symbols("x y z", real=True)
    psi = (x * (1 - x) * y * (1 - y) * z * (1 - z)) ** 2
    vel = [scale * sy.diff(psi, y), -scale * sy.diff(psi, x), sy.Integer(0)]
    p = pressure_scale * sy.sin(sy.pi * x) * sy.cos(sy.pi * y)
    coords = (x, y, z)
    force = []
    for i in range(3):
        lap = sum(sy.diff(vel[i], c, 2) for c in coords)
        f = -nu * lap + sy.diff(p, coords[i])
        if nonlinear:
            f += sum(vel[l] * sy.diff(vel[i], coords[l]) for l in range(3))
        force.append(f)

    def vec(exprs):
        fns = [sy.lambdify(coords, e, "numpy") for e in exprs]
        return lambda X, Y, Z: tuple(np.broadcast_to(fn(X, Y, Z), np.shape(X)) * 1.0 for fn in fns)

    pfn = sy.lambdify(coords, p, "numpy")
    return vec(vel), lambda X, Y, Z: np.broadcast_to(pfn(X, Y, Z), np.shape(X)) * 1.0, vec(force)


@dataclass(frozen=True)
class Manufactured:
    nu: float
    nonlinear: bool
    velocity: Callable
    pressure: Callable
    forcing: Callable


def manufactured(nu: float = 1.0, nonlinear: bool = False, scale: float = 1.0,
                 pressure_scale: float = 1.0) -> Manufactured:
    vel, p, f = _symbolic(float(nu), float(scale), bool(nonlinear), float(pressure_scale))
    return Manufactured(nu, nonlinear, vel, p, f)


def mms_error(n: int, nonlinear: bool = False, nu: float = 1.0, scale: float = 1.0,
              cfg: SolverConfig = SolverConfig()) -> float:
    """L2 velocity error (componentwise sum over nodes) of one manufactured solve."""
    ms = manufactured(nu, nonlinear, scale)
    grid = Grid(n)
    if nonlinear:
        f = VectorField.from_function(grid, ms.forcing)
        state = solve_navier_stokes(FluidProblem(nu, f), cfg)
    else:
        state = solve_stokes(StaggeredField.from_function(grid, ms.forcing), nu, grid, cfg)
    exact = VectorField.from_function(grid, ms.velocity)
    return lq_norm(state.velocity_nodes() - exact, 2.0)


def observed_orders(errors) -> list[float]:
    e = np.asarray(errors, dtype=float)
    return list(np.log2(e[:-1] / e[1:]))
