"""Vortex equations on a flat torus for C and CP^1 targets."""

from .backend import ENV_VAR, kernels, resolve
from .grid import PointSource, TorusGrid, greens_function, singular_part, sources_from_points
from .solver import (DEFAULT_MAX_ITER, DEFAULT_TOL, FieldSolution, flux_fraction,
                     moment_mean, solve_cp1, solve_taubes, total_energy, write_field_csv)

__all__ = [
    "ENV_VAR", "kernels", "resolve", "PointSource", "TorusGrid", "greens_function",
    "singular_part", "sources_from_points", "DEFAULT_MAX_ITER", "DEFAULT_TOL",
    "FieldSolution", "flux_fraction", "moment_mean", "solve_cp1", "solve_taubes",
    "total_energy", "write_field_csv",
]
