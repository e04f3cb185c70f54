import math

import numpy as np
import pytest

from quenchfront import diagnostics
from quenchfront.bvp import FrontProfile
from quenchfront.diagnostics import (admissibility, compute_diagnostics,
                                     crossing_slope, crossings, front_position,
                                     u_at_zero)
from quenchfront.grid import make_grid


def synthetic_profile(fn, x_min=-5.0, x_max=8.0, h=0.001, c=0.0):
    g = make_grid(x_min, x_max, h)
    return FrontProfile(c=c, grid=g, u=fn(g.nodes()), converged=True)


class TestFrontPosition:
    def test_analytic_exponential_crossing(self):
        p = synthetic_profile(lambda x: np.exp(-x))
        assert front_position(p, math.exp(-2.0)) == pytest.approx(2.0, abs=1e-6)

    def test_hm_reference_value(self, hm_profile):
        assert front_position(hm_profile, 0.1) == pytest.approx(1.51115, abs=1e-3)

    def test_delta_outside_range(self, hm_profile):
        with pytest.raises(ValueError):
            front_position(hm_profile, 100.0)
        with pytest.raises(ValueError):
            front_position(hm_profile, -0.1)

    def test_error_bound_recorded(self, hm_profile):
        d = compute_diagnostics(hm_profile)
        assert d.x_delta_error_bound >= 0.0
        assert d.x_delta_error_bound < 1e-3


class TestCrossings:
    def test_hm_unique_crossing(self, hm_profile):
        roots = crossings(hm_profile)
        assert len(roots) == 1
        assert roots[0] == pytest.approx(-0.682447, abs=1e-3)

    def test_transversality(self, hm_profile):
        root = crossings(hm_profile)[0]
        assert abs(crossing_slope(hm_profile, root)) > 1e-6

    def test_crossing_is_sqrt_intersection(self, hm_profile):
        root = crossings(hm_profile)[0]
        x = hm_profile.grid.nodes()
        i = int(np.argmin(np.abs(x - root)))
        assert hm_profile.u[i] == pytest.approx(math.sqrt(-x[i]), abs=1e-3)

    def test_no_crossing_when_u_stays_below_sqrt_branch(self):
        # u < sqrt(-x) where positive and exactly zero near the origin:
        # x u + u^3 never changes sign
        p = synthetic_profile(lambda x: 0.1 * np.clip(-x - 2.0, 0.0, None),
                              x_min=-8.0)
        assert crossings(p) == []


class TestAdmissibility:
    def test_zero_state_rejected(self):
        g = make_grid(-20.0, 10.0, 0.01)
        p = FrontProfile(c=0.0, grid=g, u=np.zeros(g.n), converged=True)
        v = admissibility(p)
        assert not v.admissible
        assert not v.left_limit_ok

    def test_converged_front_admissible(self, hm_profile):
        v = admissibility(hm_profile)
        assert v.admissible
        assert v.messages == []

    def test_perturbed_profile_rejected_with_location(self, hm_profile):
        u = hm_profile.u.copy()
        i = int(np.argmin(np.abs(hm_profile.grid.nodes() + 3.0)))
        u[i] -= 0.3  # carve a non-monotone notch
        p = FrontProfile(c=0.0, grid=hm_profile.grid, u=u, converged=True)
        v = admissibility(p)
        assert not v.strictly_decreasing
        assert v.violation_location == pytest.approx(-3.0, abs=0.1)

    def test_negative_dip_rejected(self, hm_profile):
        u = hm_profile.u.copy()
        i = int(np.argmin(np.abs(hm_profile.grid.nodes() - 5.0)))
        u[i] = -1e-3
        p = FrontProfile(c=0.0, grid=hm_profile.grid, u=u, converged=True)
        assert not admissibility(p).positive


class TestUAtZero:
    def test_node_exact(self, hm_profile):
        x = hm_profile.grid.nodes()
        i = int(np.argmin(np.abs(x)))
        assert u_at_zero(hm_profile) == hm_profile.u[i]

    def test_off_grid_interpolation(self):
        from quenchfront.grid import Grid
        g = Grid(0.05, 1.05, 11)  # zero not a node
        p = FrontProfile(c=0.0, grid=g, u=np.exp(-g.nodes()), converged=True)
        # extrapolated via cubic spline; crude but finite
        assert np.isfinite(u_at_zero(p))


class TestBundle:
    def test_compute_diagnostics_fields(self, hm_profile):
        d = compute_diagnostics(hm_profile)
        assert d.monotone_x
        assert d.min_slope_gap <= 0.0  # flat only where the tail underflowed
        assert d.delta == 0.1
        assert d.u_at_zero == pytest.approx(0.5191034, abs=1e-5)
        assert len(d.crossing_points) == 1
