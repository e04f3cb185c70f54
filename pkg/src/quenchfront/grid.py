"""Uniform 1-D mesh and fourth-order finite-difference stencils.

Interior second derivatives use the centered 5-point stencil; first
derivatives use a 5-point stencil shifted one node against the drift
direction (upwinding).  Rows next to the boundary fall back to clamped
windows wide enough to keep fourth-order accuracy (6 points for the second
derivative).  Boundary rows themselves are left untouched: the solver
replaces them with closure conditions.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

MAX_BANDWIDTH = 4  # widest clamped stencil reaches 4 nodes off-diagonal


@dataclass(frozen=True)
class Grid:
    """Uniform mesh x_i = x_min + i*h, i = 0..n-1, h = (x_max-x_min)/(n-1)."""

    x_min: float
    x_max: float
    n: int

    def __post_init__(self):
        if self.n < 9:
            raise ValueError(f"need n >= 9 for biased 4th-order stencils, got {self.n}")
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / (self.n - 1)

    def nodes(self) -> np.ndarray:
        return self.x_min + self.h * np.arange(self.n)


def make_grid(x_min: float, x_max: float, h_target: float = 0.01) -> Grid:
    """Grid with spacing <= h_target, endpoints snapped outward to multiples
    of h_target so that x = 0 is a node whenever it lies inside the domain."""
    # the 1e-9 nudges absorb roundoff when x/h is already an integer
    k_lo = int(np.floor(x_min / h_target + 1e-9))
    k_hi = int(np.ceil(x_max / h_target - 1e-9))
    return Grid(x_min=k_lo * h_target, x_max=k_hi * h_target, n=k_hi - k_lo + 1)


class BandedMatrix:
    """Square banded matrix, diagonally-indexed storage.

    ``data[bandwidth + i - j, j]`` holds entry (i, j); the layout matches
    what the LAPACK banded solver expects, so no copy is needed to solve.
    The sparsity pattern is symmetric (same width above and below) although
    the values need not be.
    """

    def __init__(self, n: int, bandwidth: int):
        if bandwidth > MAX_BANDWIDTH:
            raise ValueError(f"bandwidth {bandwidth} exceeds stencil bound {MAX_BANDWIDTH}")
        self.n = n
        self.bandwidth = bandwidth
        self.data = np.zeros((2 * bandwidth + 1, n))

    def copy(self) -> "BandedMatrix":
        out = BandedMatrix(self.n, self.bandwidth)
        out.data[:] = self.data
        return out

    def add(self, i: int, j: int, value: float) -> None:
        if abs(i - j) > self.bandwidth:
            raise IndexError(f"entry ({i},{j}) outside band")
        self.data[self.bandwidth + i - j, j] += value

    def get(self, i: int, j: int) -> float:
        if abs(i - j) > self.bandwidth:
            return 0.0
        return self.data[self.bandwidth + i - j, j]

    def add_diagonal(self, values: np.ndarray) -> None:
        self.data[self.bandwidth, :] += values

    def set_identity_row(self, i: int) -> None:
        for j in range(max(0, i - self.bandwidth), min(self.n, i + self.bandwidth + 1)):
            self.data[self.bandwidth + i - j, j] = 0.0
        self.data[self.bandwidth, i] = 1.0

    def zero_row(self, i: int) -> None:
        for j in range(max(0, i - self.bandwidth), min(self.n, i + self.bandwidth + 1)):
            self.data[self.bandwidth + i - j, j] = 0.0

    def matvec(self, u: np.ndarray) -> np.ndarray:
        if u.shape != (self.n,):
            raise ValueError(f"vector length {u.shape} does not match n={self.n}")
        out = np.zeros(self.n)
        p = self.bandwidth
        for d in range(-p, p + 1):
            i0 = max(0, d)
            i1 = self.n + min(0, d)
            if i1 > i0:
                out[i0:i1] += self.data[p + d, i0 - d:i1 - d] * u[i0 - d:i1 - d]
        return out

    def toarray(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        p = self.bandwidth
        for d in range(-p, p + 1):
            i0 = max(0, d)
            i1 = self.n + min(0, d)
            for i in range(i0, i1):
                a[i, i - d] = self.data[p + d, i - d]
        return a


def fd_weights(z: float, xs: np.ndarray, m: int) -> np.ndarray:
    """Finite-difference weights for the m-th derivative at z on nodes xs
    (Fornberg's recursion)."""
    n = len(xs)
    c = np.zeros((n, m + 1))
    c[0, 0] = 1.0
    c1 = 1.0
    c4 = xs[0] - z
    for i in range(1, n):
        mn = min(i, m)
        c2 = 1.0
        c5 = c4
        c4 = xs[i] - z
        for j in range(i):
            c3 = xs[i] - xs[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, m]


def _stencil(offsets: tuple[int, ...], m: int) -> np.ndarray:
    return fd_weights(0.0, np.array(offsets, dtype=float), m)


def _row_windows_d2(n: int) -> list[tuple[int, np.ndarray]]:
    """(start_index, weights) per interior row for the second derivative."""
    w_center = _stencil((-2, -1, 0, 1, 2), 2)
    w_left = _stencil((-1, 0, 1, 2, 3, 4), 2)     # row 1, 6-point biased
    w_right = _stencil((-4, -3, -2, -1, 0, 1), 2)  # row n-2, mirror
    rows: list[tuple[int, np.ndarray]] = [(0, w_left)]
    rows += [(i - 2, w_center) for i in range(2, n - 2)]
    rows.append((n - 6, w_right))
    return rows


def _row_windows_d1(n: int, upwind_sign: int) -> list[tuple[int, np.ndarray]]:
    """(start_index, weights) per interior row for the first derivative.

    upwind_sign > 0 shifts the window one node to +x (characteristics of the
    drift term c*u_x enter from the right when c > 0), upwind_sign < 0
    mirrors that, 0 keeps the stencil centered.  Windows are clamped at the
    boundaries; all variants use 5 points and stay fourth order.
    """
    if upwind_sign > 0:
        desired_lo = -1
    elif upwind_sign < 0:
        desired_lo = -3
    else:
        desired_lo = -2
    rows = []
    cache: dict[int, np.ndarray] = {}
    for i in range(1, n - 1):
        s = min(max(i + desired_lo, 0), n - 5)
        offsets = tuple(range(s - i, s - i + 5))
        if offsets[0] not in cache:
            cache[offsets[0]] = _stencil(offsets, 1)
        rows.append((s, cache[offsets[0]]))
    return rows


@lru_cache(maxsize=64)
def d2_band(g: Grid) -> BandedMatrix:
    """Banded second-derivative operator; boundary rows are zero."""
    band = BandedMatrix(g.n, MAX_BANDWIDTH)
    scale = 1.0 / g.h ** 2
    for i, (s, w) in enumerate(_row_windows_d2(g.n), start=1):
        for k, wk in enumerate(w):
            band.add(i, s + k, wk * scale)
    return band


@lru_cache(maxsize=64)
def d1_band(g: Grid, upwind_sign: int) -> BandedMatrix:
    """Banded first-derivative operator; boundary rows are zero."""
    band = BandedMatrix(g.n, MAX_BANDWIDTH)
    scale = 1.0 / g.h
    for i, (s, w) in enumerate(_row_windows_d1(g.n, upwind_sign), start=1):
        for k, wk in enumerate(w):
            band.add(i, s + k, wk * scale)
    return band


def d2_apply(g: Grid, u: np.ndarray) -> np.ndarray:
    """Fourth-order second derivative at interior nodes (boundary rows 0)."""
    u = np.asarray(u, dtype=float)
    if u.shape != (g.n,):
        raise ValueError(f"vector length {u.shape} does not match grid n={g.n}")
    return d2_band(g).matvec(u)


def d1_apply(g: Grid, u: np.ndarray, upwind_sign: int = 0) -> np.ndarray:
    """Fourth-order first derivative at interior nodes, biased against the
    characteristic direction when upwind_sign = sign(c) is nonzero."""
    u = np.asarray(u, dtype=float)
    if u.shape != (g.n,):
        raise ValueError(f"vector length {u.shape} does not match grid n={g.n}")
    return d1_band(g, int(np.sign(upwind_sign))).matvec(u)
