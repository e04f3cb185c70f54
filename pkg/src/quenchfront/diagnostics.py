"""Quantitative front descriptors and admissibility verdicts."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .bvp import BoundaryClosure, FrontProfile

DEFAULT_DELTA = 0.1
_NOISE_REL = 1e-12  # positivity/monotonicity noise floor relative to max(u)


@dataclass
class FrontDiagnostics:
    x_delta: float
    delta: float
    crossing_points: list[float]
    monotone_x: bool
    min_slope_gap: float        # max forward-difference slope; < 0 when monotone
    u_at_zero: float
    x_delta_error_bound: float  # h^2 |u''| / |u'| at the crossing


@dataclass
class AdmissibilityVerdict:
    positive: bool
    strictly_decreasing: bool
    left_limit_ok: bool
    right_limit_ok: bool
    violation_location: float | None = None
    messages: list[str] = field(default_factory=list)

    @property
    def admissible(self) -> bool:
        return (self.positive and self.strictly_decreasing
                and self.left_limit_ok and self.right_limit_ok)


def front_position(p: FrontProfile, delta: float = DEFAULT_DELTA) -> float:
    """Interface position x_delta = sup{x : u(x) > delta} by linear
    interpolation of the unique level crossing of a decreasing profile."""
    u = p.u
    if not (u.max() > delta > u.min()):
        raise ValueError(
            f"delta={delta} outside the profile range [{u.min():.3g}, {u.max():.3g}]")
    above = np.nonzero(u > delta)[0]
    i = int(above[-1])
    if i + 1 >= p.grid.n:
        raise ValueError("level crossing sits on the right boundary")
    x = p.grid.nodes()
    frac = (u[i] - delta) / (u[i] - u[i + 1])
    return float(x[i] + frac * p.grid.h)


def front_position_error_bound(p: FrontProfile, delta: float = DEFAULT_DELTA) -> float:
    """Linear-interpolation error estimate h^2 |u''| / |u'| at the crossing."""
    u = p.u
    above = np.nonzero(u > delta)[0]
    i = min(max(int(above[-1]), 1), p.grid.n - 2)
    h = p.grid.h
    upp = (u[i + 1] - 2 * u[i] + u[i - 1]) / h ** 2
    up = (u[i + 1] - u[i - 1]) / (2 * h)
    if up == 0:
        return math.inf
    return float(h ** 2 * abs(upp) / abs(up))


def crossings(p: FrontProfile, refine_tol: float = 1e-10) -> list[float]:
    """Roots with x < 0 of g(x) = x u + u^3 (equivalently u = sqrt(-x)),
    located by a sign-change scan at grid resolution plus bisection on the
    cubic-spline interpolant.  For x > 0 and u > 0 the expression is
    strictly positive, which is checked rather than assumed."""
    x = p.grid.nodes()
    g = x * p.u + p.u ** 3
    # below ~1e-300 the products themselves underflow, so the sign claim
    # is only checkable above that floor
    pos = (x > 0) & (p.u > 1e-300)
    if np.any(g[pos] <= 0):
        raise AssertionError("x u + u^3 should be positive wherever x, u > 0")

    spline = CubicSpline(x, g)
    roots: list[float] = []
    # include the x = 0 node: as c grows the root approaches -u(0)^2, which
    # collapses into the final subgrid interval long before it underflows
    neg = x <= 0.0
    gn, xn = g[neg], x[neg]
    sign_change = np.nonzero(np.sign(gn[:-1]) * np.sign(gn[1:]) < 0)[0]
    for i in sign_change:
        a, b = float(xn[i]), float(xn[i + 1])
        fa = spline(a)
        while b - a > refine_tol:
            mid = 0.5 * (a + b)
            fm = spline(mid)
            if fa * fm <= 0:
                b = mid
            else:
                a, fa = mid, fm
        roots.append(0.5 * (a + b))
    return roots


def crossing_slope(p: FrontProfile, root: float) -> float:
    """d/dx (x u + u^3) at a crossing (transversality check)."""
    x = p.grid.nodes()
    spline = CubicSpline(x, x * p.u + p.u ** 3)
    return float(spline(root, 1))


def u_at_zero(p: FrontProfile) -> float:
    x = p.grid.nodes()
    i = int(np.argmin(np.abs(x)))
    if abs(x[i]) < 0.25 * p.grid.h:
        return float(p.u[i])
    return float(CubicSpline(x, p.u)(0.0))


def admissibility(p: FrontProfile, bc: BoundaryClosure | None = None,
                  delta: float = DEFAULT_DELTA) -> AdmissibilityVerdict:
    """Bundle of admissibility checks; never raises.

    Positivity and monotonicity are tested above a relative noise floor:
    far-tail nodes sit at (or underflow below) double-precision resolution,
    where a strict sign test is meaningless.
    """
    bc = bc or BoundaryClosure()
    u = p.u
    x = p.grid.nodes()
    scale = max(1.0, float(np.abs(u).max()))
    verdict = AdmissibilityVerdict(positive=True, strictly_decreasing=True,
                                   left_limit_ok=True, right_limit_ok=True)

    bad = np.nonzero(u[1:-1] < -_NOISE_REL * scale)[0]
    if bad.size:
        verdict.positive = False
        verdict.violation_location = float(x[1 + bad[0]])
        verdict.messages.append(f"negative value at x={x[1 + bad[0]]:.4g}")

    du = np.diff(u)
    if np.any(du > _NOISE_REL * scale):
        i = int(np.argmax(du))
        verdict.strictly_decreasing = False
        verdict.violation_location = float(x[i])
        verdict.messages.append(f"increase at x={x[i]:.4g}")
    else:
        umax = u.max()
        interface = (u >= 0.1 * umax) & (u <= 0.9 * umax)
        idx = np.nonzero(interface[:-1])[0]
        if idx.size and np.max(du[idx] / p.grid.h) >= -1e-12:
            verdict.strictly_decreasing = False
            verdict.messages.append("interface slope not strictly negative")

    s = -p.grid.x_min
    if s <= 0:
        verdict.left_limit_ok = False
        verdict.messages.append("domain does not reach x < 0")
    else:
        tol = 2.0 * max(abs(p.c) / (2.0 * math.sqrt(2.0) * s * s),
                        1.0 / (8.0 * s ** 3)) * math.sqrt(s) + 1e-10
        gap = abs(u[0] - math.sqrt(s))
        if gap > tol:
            verdict.left_limit_ok = False
            verdict.messages.append(
                f"left boundary gap {gap:.3g} exceeds closure tolerance {tol:.3g}")

    if abs(u[-1]) > 1e-8:
        verdict.right_limit_ok = False
        verdict.messages.append(f"right boundary value {u[-1]:.3g} not ~0")

    return verdict


def compute_diagnostics(p: FrontProfile, delta: float = DEFAULT_DELTA) -> FrontDiagnostics:
    du = np.diff(p.u) / p.grid.h
    verdict = admissibility(p, delta=delta)
    return FrontDiagnostics(
        x_delta=front_position(p, delta),
        delta=delta,
        crossing_points=crossings(p),
        monotone_x=verdict.strictly_decreasing,
        min_slope_gap=float(du.max()),
        u_at_zero=u_at_zero(p),
        x_delta_error_bound=front_position_error_bound(p, delta),
    )
