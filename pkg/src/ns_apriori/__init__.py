"""Discrete Hölder-norm verification of a-priori estimates for the steady
Navier-Stokes system on the unit cube."""

from .exponents import ExponentSet, omega
from .function_spaces import Grid, ScalarField, VectorField, c_norm, holder_seminorm, lq_norm
from .ns_solver import FluidProblem, SolverConfig, solve_navier_stokes, solve_stokes

__all__ = [
    "ExponentSet",
    "FluidProblem",
    "Grid",
    "ScalarField",
    "SolverConfig",
    "VectorField",
    "c_norm",
    "holder_seminorm",
    "lq_norm",
    "omega",
    "solve_navier_stokes",
    "solve_stokes",
]
