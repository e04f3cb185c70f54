"""Monotone front solutions of u'' + c u' - x u - u^3 = 0.

Solver (4th-order finite differences + damped Newton), natural-parameter
continuation in the drift speed c, spectra of the linearization, IMEX time
stepping, closed-form asymptotic cross-checks, and a quantitative
acceptance suite.
"""

__version__ = "0.1.0"

from .asymptotics import (erf_profile, front_loc_largec, front_loc_negc,
                          left_tail, right_tail)
from .bvp import (BoundaryClosure, FrontProfile, default_grid,
                  fit_tail_coefficients, jacobian, residual)
from .continuation import Branch, continue_branch, reinterpolate, solve_front
from .diagnostics import admissibility, compute_diagnostics, crossings, front_position
from .evolve import EvolveConfig, EvolveResult, ImexStepper, compare_inner_scaling
from .grid import BandedMatrix, Grid, d1_apply, d2_apply, make_grid
from .newton import SolveReport, SolverConfig, banded_lu_solve, solve
from .specialfns import Omega0Result, bessel_j_third, erf, omega0
from .spectrum import SpectrumReport, build_potential, leading_eigenvalues

__all__ = [
    "__version__",
    "BandedMatrix", "BoundaryClosure", "Branch", "EvolveConfig", "EvolveResult",
    "FrontProfile", "Grid", "ImexStepper", "Omega0Result", "SolveReport",
    "SolverConfig", "SpectrumReport",
    "admissibility", "banded_lu_solve", "bessel_j_third", "build_potential",
    "compare_inner_scaling", "compute_diagnostics", "continue_branch",
    "crossings", "d1_apply", "d2_apply", "default_grid", "erf", "erf_profile",
    "fit_tail_coefficients", "front_loc_largec", "front_loc_negc",
    "front_position", "jacobian", "leading_eigenvalues", "left_tail",
    "make_grid", "omega0", "reinterpolate", "residual", "right_tail", "solve",
    "solve_front",
]
