"""Closed-form limit profiles and front-position predictions.

These formulas serve double duty: initial guesses for the Newton solver and
independent cross-checks for converged solutions.  All evaluation happens in
the un-scaled (x, u, c) variables; the internal rescalings valid for large
|c| are applied inside each function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .specialfns import erf, erfc, omega0

__all__ = [
    "AsymptoticPrediction",
    "erf_profile",
    "front_loc_largec",
    "front_loc_negc",
    "right_tail",
    "left_tail",
    "right_tail_log_derivative",
    "left_tail_exponent",
    "erf_front_position",
    "predict",
]

_SQRT2 = math.sqrt(2.0)
_PI_QUARTER = math.pi ** 0.25


def erf_profile(x: float, c: float) -> float:
    """Leading-order front profile for c < 0:
    u = (-c)^{1/4} e^{x^2/(2c)} / (pi^{1/4} (erf(x/sqrt(-c)) + 1)^{1/2})."""
    if c >= 0:
        raise ValueError(f"erf profile requires c < 0, got c={c}")
    z = x / math.sqrt(-c)
    # for z <= -3 compute erf(z)+1 = erfc(-z) directly to avoid cancellation
    denom = erfc(-z) if z <= -3.0 else erf(z) + 1.0
    return (-c) ** 0.25 * math.exp(x * x / (2.0 * c)) / (_PI_QUARTER * math.sqrt(denom))


def erf_profile_vec(x: np.ndarray, c: float) -> np.ndarray:
    return np.array([erf_profile(float(t), c) for t in np.asarray(x, dtype=float)])


def front_loc_largec(c: float) -> float:
    """Delayed front position -c^2/4 - Omega0 * (15/16)^{2/3} for c > 0."""
    if c <= 0:
        raise ValueError(f"front delay formula requires c > 0, got c={c}")
    return -c * c / 4.0 - omega0().value * (15.0 / 16.0) ** (2.0 / 3.0)


def front_loc_negc(c: float) -> float:
    """Reverse-quench position sqrt(-c) for c < 0."""
    if c >= 0:
        raise ValueError(f"reverse-quench formula requires c < 0, got c={c}")
    return math.sqrt(-c)


def right_tail(x: float, c: float, alpha_plus: float) -> float:
    """Leading right-tail term
    alpha_+ exp(-(2/3)(x + c^2/4)^{3/2} - c x/2) x^{-1/4}."""
    if not x > max(0.0, -c * c / 4.0) + 1.0:
        raise ValueError(f"right tail needs x > max(0, -c^2/4) + 1, got x={x}")
    expo = -(2.0 / 3.0) * (x + c * c / 4.0) ** 1.5 - 0.5 * c * x
    return alpha_plus * math.exp(expo) * x ** -0.25


def right_tail_log_derivative(x: float, c: float) -> float:
    """d/dx log(right_tail) = -sqrt(x + c^2/4) - c/2 - 1/(4x)."""
    return -math.sqrt(x + c * c / 4.0) - 0.5 * c - 0.25 / x


def left_tail_exponent(x: float, c: float) -> float:
    """Exponent of the decaying left-tail correction:
    -(2 sqrt2/3)(-x)^{3/2} - c x/2 - c^2 (-x)^{1/2}/(4 sqrt2)."""
    s = -x
    return (-(2.0 * _SQRT2 / 3.0) * s ** 1.5 - 0.5 * c * x
            - c * c / (4.0 * _SQRT2) * math.sqrt(s))


def left_tail(x: float, c: float, alpha_minus: float, truncation: int = 1) -> float:
    """Left-tail expansion sqrt(-x) (algebraic series + alpha_- exp term).

    ``truncation`` selects how many printed algebraic corrections to keep
    (0 or 1); the series branch differs between c = 0 and c != 0:
    1 - 1/(8(-x)^3) versus 1 + c/(2 sqrt2 x^2).
    """
    if not x < -2.0:
        raise ValueError(f"left tail needs x < -2, got x={x}")
    if truncation not in (0, 1):
        raise ValueError(f"truncation level must be 0 or 1, got {truncation}")
    s = -x
    algebraic = 1.0
    if truncation >= 1:
        if c == 0.0:
            algebraic -= 1.0 / (8.0 * s ** 3)
        else:
            algebraic += c / (2.0 * _SQRT2 * x * x)
    return math.sqrt(s) * (algebraic + alpha_minus * math.exp(left_tail_exponent(x, c)))


def erf_front_position(c: float, delta: float = 0.1) -> float:
    """Level-delta crossing of the closed-form profile (c < 0), by bisection.

    The initial bracket comes from the Gaussian shape of the spill-over
    tail, x ~ sqrt(2|c| ln(u(0)/delta)), then widens if needed.
    """
    if c >= 0:
        raise ValueError("erf front position requires c < 0")
    amp = erf_profile(0.0, c)
    if not 0.0 < delta < amp:
        raise ValueError(f"delta={delta} outside the profile's decaying range")
    lo = 0.0
    hi = math.sqrt(2.0 * (-c) * (math.log(amp / delta) + 2.0)) + 5.0
    for _ in range(60):
        if erf_profile(hi, c) < delta:
            break
        hi *= 1.5
    else:
        raise ArithmeticError("could not bracket the level crossing")
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if erf_profile(mid, c) > delta:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass
class AsymptoticPrediction:
    """Tagged bundle of closed-form predicted values for one c."""

    kind: str
    c: float
    values: dict = field(default_factory=dict)


_KINDS = ("right_tail", "left_tail", "erf_profile", "u_at_zero_negc",
          "front_loc_largec", "front_loc_negc")


def predict(kind: str, c: float, xs: np.ndarray | None = None,
            alpha: float = 1.0) -> AsymptoticPrediction:
    """Evaluate one family of predictions; scalar kinds ignore ``xs``."""
    if kind not in _KINDS:
        raise ValueError(f"unknown prediction kind {kind!r}")
    if kind == "u_at_zero_negc":
        if c >= 0:
            raise ValueError("u(0) amplitude law requires c < 0")
        return AsymptoticPrediction(kind, c, {0.0: (-c) ** 0.25 / _PI_QUARTER})
    if kind == "front_loc_largec":
        return AsymptoticPrediction(kind, c, {"x_delta": front_loc_largec(c)})
    if kind == "front_loc_negc":
        return AsymptoticPrediction(kind, c, {"x_delta": front_loc_negc(c)})
    if xs is None:
        raise ValueError(f"prediction kind {kind!r} needs sample points")
    fn = {"right_tail": lambda t: right_tail(t, c, alpha),
          "left_tail": lambda t: left_tail(t, c, alpha),
          "erf_profile": lambda t: erf_profile(t, c)}[kind]
    return AsymptoticPrediction(kind, c, {float(t): fn(float(t)) for t in xs})
