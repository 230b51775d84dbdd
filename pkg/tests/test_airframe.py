import math
from types import SimpleNamespace

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rotorlin.airframe import (ForceMoment, compute_loads, fuselage_fin_forces, gravity_forces,
                               hub_air_velocities, total_forces_moments)
from rotorlin.dynamics import ControlInput, FlightState
from rotorlin.rotor import AirVelocity

NO_WASH = SimpleNamespace(induced_velocity=0.0)


def test_still_air_no_downwash_gives_no_drag(params):
    fm = fuselage_fin_forces(AirVelocity(0.0, 0.0, 0.0), NO_WASH, params)
    assert np.all(fm.as_array() == 0.0)


def test_hover_download(params):
    wi = 4.582
    fm = fuselage_fin_forces(AirVelocity(0.0, 0.0, 0.0), SimpleNamespace(induced_velocity=wi), params)
    # z points down: the download adds to weight and opposes thrust
    assert fm.Z == pytest.approx(0.5 * params.rho * params.s_fus_z * wi ** 2, rel=1e-14)
    assert fm.X == 0.0 and fm.Y == 0.0


def test_forward_drag(params):
    u = 16.5557
    fm = fuselage_fin_forces(AirVelocity(u, 0.0, 0.0), NO_WASH, params)
    assert fm.X == pytest.approx(-0.5 * params.rho * params.s_fus_x * u ** 2, rel=1e-14)


def test_force_at_moment_is_cross_product():
    r = np.array([-0.91, 0.1, -0.08])
    f = np.array([1.5, -2.0, 3.0])
    fm = ForceMoment.force_at(*f, *r)
    np.testing.assert_allclose(fm.as_array()[3:], np.cross(r, f), rtol=1e-15)


def test_gravity_only_level():
    p = SimpleNamespace(m=8.2, g=9.80665)
    np.testing.assert_array_equal(gravity_forces(0.0, 0.0, p).as_array(), [0, 0, 8.2 * 9.80665, 0, 0, 0])


@given(st.floats(-math.pi, math.pi), st.floats(-1.5, 1.5))
def test_gravity_magnitude(phi, theta):
    p = SimpleNamespace(m=8.2, g=9.80665)
    f = gravity_forces(phi, theta, p).as_array()
    assert np.linalg.norm(f[:3]) == pytest.approx(8.2 * 9.80665, rel=1e-14)


def test_hub_velocities_from_rates(params):
    s = FlightState(1.0, 2.0, 3.0, 0.1, 0.2, 0.3)
    main, tail = hub_air_velocities(s, params)
    assert main == AirVelocity(1.0 - 0.2 * params.h_mr, 2.0 + 0.1 * params.h_mr, 3.0)
    assert tail.v_a == pytest.approx(2.0 - 0.3 * params.l_tr + 0.1 * params.h_tr, rel=1e-15)
    assert tail.w_a == pytest.approx(3.0 + 0.2 * params.l_tr, rel=1e-15)


def test_yaw_balance_at_hover(hover, params):
    n_tr = hover.tail_sol.thrust * params.l_tr
    q_mr = hover.main_sol.torque
    assert abs(n_tr - q_mr) / q_mr < 5e-3


def test_loads_vanish_at_trim(hover, params):
    fm = total_forces_moments(hover.state.without_flapping(), hover.controls, params)
    assert np.linalg.norm(fm.as_array()) < 1e-8


def test_explicit_flapping_overrides(hover, params):
    st_aug = hover.state
    a = total_forces_moments(st_aug, hover.controls, params).as_array()
    b = total_forces_moments(st_aug.without_flapping(), hover.controls, params).as_array()
    np.testing.assert_allclose(a, b, atol=1e-9)
    tilted = FlightState(*st_aug.as_array()[:9], st_aug.a1s + 0.01, st_aug.b1s)
    c = total_forces_moments(tilted, hover.controls, params)
    assert c.M > a[4] + 0.5  # back tilt pitches the nose up


def test_loads_components_sum(hover, params):
    ld = compute_loads(hover.state.without_flapping(), hover.controls, params)
    parts = ld.main_rotor + ld.tail_rotor + ld.airframe + ld.gravity
    np.testing.assert_allclose(parts.as_array(), ld.total.as_array(), rtol=0, atol=1e-14)


def test_small_angle_thrust_direction(params):
    s = FlightState()
    ld = compute_loads(s, ControlInput(0.1, 0.2, 0.0, 0.0), params)
    assert ld.main_rotor.Z < 0  # thrust acts up
    assert ld.tail_rotor.N > 0
