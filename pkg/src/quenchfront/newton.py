"""Damped Newton iteration with banded direct linear solves.

The linear solves go through LAPACK's banded LU with partial pivoting
(scipy.linalg.solve_banded); every solve is residual-checked so a silently
near-singular Jacobian still surfaces as an error.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .bvp import BoundaryClosure, FrontProfile, stationary_jacobian, stationary_residual
from .grid import BandedMatrix, Grid


class SolverError(RuntimeError):
    """Base class for Newton-iteration failures."""


class SingularJacobianError(SolverError):
    pass


class DivergenceError(SolverError):
    pass


class MaxIterationsError(SolverError):
    pass


@dataclass
class SolverConfig:
    tol_residual: float = 1e-10   # max-norm of the residual
    max_iter: int = 50
    damping: str = "armijo"       # "armijo" | "none"
    positivity_clip: bool = False
    backtrack_factor: float = 0.5
    min_step: float = 2.0 ** -20

    def __post_init__(self):
        if self.tol_residual <= 0:
            raise ValueError("tol_residual must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.damping not in ("armijo", "none"):
            raise ValueError(f"unknown damping mode {self.damping!r}")


@dataclass
class SolveReport:
    converged: bool
    iterations: int
    final_residual: float
    step_norms: list[float] = field(default_factory=list)
    residual_norms: list[float] = field(default_factory=list)
    positive: bool = False
    decreasing: bool = False


def banded_lu_solve(A: BandedMatrix, b: np.ndarray) -> np.ndarray:
    """Solve A x = b by banded LU with partial pivoting.

    Raises SingularJacobianError when the factorization breaks down or the
    backward error exceeds 1e-9 (||Ax-b|| vs ||A|| ||x|| + ||b||).
    """
    b = np.asarray(b, dtype=float)
    try:
        x = scipy.linalg.solve_banded((A.bandwidth, A.bandwidth), A.data, b)
    except np.linalg.LinAlgError as exc:
        raise SingularJacobianError(f"banded LU failed: {exc}") from exc
    if not np.all(np.isfinite(x)):
        raise SingularJacobianError("banded LU produced non-finite solution")
    norm_a = np.abs(A.data).sum(axis=0).max()
    backward = np.abs(A.matvec(x) - b).max()
    scale = norm_a * np.abs(x).max() + np.abs(b).max()
    if backward > 1e-9 * scale:
        raise SingularJacobianError(
            f"banded solve residual {backward:.3e} exceeds 1e-9 * {scale:.3e}")
    return x


def solve_system(residual_fn, jacobian_fn, u0: np.ndarray,
                 cfg: SolverConfig | None = None) -> tuple[np.ndarray, SolveReport]:
    """Generic damped Newton loop on residual_fn/jacobian_fn."""
    cfg = cfg or SolverConfig()
    u = np.asarray(u0, dtype=float).copy()
    f = residual_fn(u)
    res = float(np.abs(f).max())
    report = SolveReport(converged=False, iterations=0, final_residual=res,
                         residual_norms=[res])

    for it in range(1, cfg.max_iter + 1):
        if res <= cfg.tol_residual:
            break
        jac = jacobian_fn(u)
        step = banded_lu_solve(jac, -f)

        t = 1.0
        if cfg.damping == "armijo":
            while t >= cfg.min_step:
                trial = u + t * step
                f_trial = residual_fn(trial)
                if np.abs(f_trial).max() <= (1.0 - 1e-4 * t) * res:
                    break
                t *= cfg.backtrack_factor
            else:
                t = cfg.min_step
                trial = u + t * step
                f_trial = residual_fn(trial)
        else:
            trial = u + step
            f_trial = residual_fn(trial)

        u = trial
        if cfg.positivity_clip:
            u = np.maximum(u, 0.0)
            f_trial = residual_fn(u)
        f = f_trial
        res = float(np.abs(f).max())
        report.iterations = it
        report.step_norms.append(float(t * np.abs(step).max()))
        report.residual_norms.append(res)
        if len(report.residual_norms) > 5 and res > 10.0 * report.residual_norms[-6]:
            report.final_residual = res
            raise DivergenceError(
                f"residual grew 10x over 5 iterations (now {res:.3e})")

    report.final_residual = res
    report.converged = res <= cfg.tol_residual
    if not report.converged:
        raise MaxIterationsError(
            f"no convergence in {cfg.max_iter} iterations, residual {res:.3e}")
    return u, report


def solve(initial: FrontProfile, bc: BoundaryClosure | None = None,
          cfg: SolverConfig | None = None) -> tuple[FrontProfile, SolveReport]:
    """Newton-solve the stationary front equation from an initial profile.

    Positivity and monotonicity of the result are recorded in the report,
    not enforced; admissibility is verified post hoc so that a defective
    solve is visible rather than masked.
    """
    bc = bc or BoundaryClosure()
    g: Grid = initial.grid
    gl = bc.left_value(initial.c, g.x_min)
    gr = bc.right_value(initial.c, g.x_max)

    u, report = solve_system(
        lambda v: stationary_residual(g, v, initial.c, gl, gr),
        lambda v: stationary_jacobian(g, v, initial.c),
        initial.u, cfg)

    report.positive = bool(np.all(u[1:-1] > 0.0))
    report.decreasing = bool(np.all(np.diff(u) <= 1e-12 * max(1.0, np.abs(u).max())))
    profile = FrontProfile(c=initial.c, grid=g, u=u,
                           residual_norm=report.final_residual,
                           converged=report.converged)
    return profile, report
