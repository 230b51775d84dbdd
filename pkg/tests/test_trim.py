import math

import numpy as np
import pytest

from rotorlin.dynamics import derivative_vector
from rotorlin.trim import (MU_MAX, MuOutOfRange, TrimNotConverged, initial_guess, trim_forward,
                           trim_hover, trim_unknowns)


def test_hover_values(hover):
    assert hover.condition_label == "hover"
    assert hover.main_sol.thrust == pytest.approx(81.616, rel=0.02)
    assert math.degrees(hover.controls.d_coll) == pytest.approx(6.001, abs=0.1)
    assert hover.residual_norm <= 1e-10
    assert hover.residual_history[-1] == hover.residual_norm
    assert abs(hover.state.a1s) < 0.3 and abs(hover.state.b1s) < 0.3


def test_hover_attitude_signs(hover):
    # tail thrust to port is balanced by a right roll and right lateral tilt
    assert hover.state.phi > 0
    assert hover.state.b1s > 0


def test_zero_velocity_forward_is_hover(params, hover):
    tp = trim_forward(params, (0.0, 0.0, 0.0))
    np.testing.assert_allclose(trim_unknowns(tp), trim_unknowns(hover), rtol=0, atol=1e-12)


def test_guess_is_near_hover(params, hover):
    g = initial_guess(params)
    assert g[0] == pytest.approx(hover.controls.d_coll, rel=0.02)
    assert g[1] == pytest.approx(hover.controls.d_ped, rel=0.1)


def test_doubled_tail_arm_halves_tail_thrust(params, hover):
    long_tail = params.replace(l_tr=2 * params.l_tr)
    tp = trim_hover(long_tail)
    t_tr = tp.tail_sol.thrust
    assert t_tr * long_tail.l_tr == pytest.approx(tp.main_sol.torque, rel=5e-3)
    assert t_tr == pytest.approx(0.5 * hover.tail_sol.thrust, rel=0.01)


def test_speed_sweep_is_continuous(params):
    speeds = np.arange(1.0, 17.0)
    zs, slopes = [], []
    guess = None
    for u in speeds:
        tp = trim_forward(params, (u, 0.0, 0.0), guess=guess)
        assert tp.residual_norm <= 1e-10
        guess = trim_unknowns(tp)
        zs.append(guess)
        hi = trim_unknowns(trim_forward(params, (u + 0.05, 0.0, 0.0), guess=guess))
        lo = trim_unknowns(trim_forward(params, (u - 0.05, 0.0, 0.0), guess=guess))
        slopes.append(np.abs(hi - lo) / 0.1)
    zs, slopes = np.array(zs), np.array(slopes)
    for k in range(len(speeds) - 1):
        local = np.maximum(slopes[k], slopes[k + 1])
        assert np.all(np.abs(zs[k + 1] - zs[k]) <= 5 * local + 1e-9)
    # nose down to push forward at speed
    assert zs[-1, 5] < 0


def test_forward_is_an_equilibrium(forward, params):
    d = derivative_vector(forward.state.as_array(), forward.controls.as_array(), params)
    assert np.max(np.abs(d)) <= 1e-6


def test_advance_ratio_limit(params):
    u = 1.01 * MU_MAX * params.mr_tip_speed
    with pytest.raises(MuOutOfRange) as exc:
        trim_forward(params, (u, 0.0, 0.0))
    assert exc.value.mu > MU_MAX
    assert exc.value.exit_code == 2


def test_nonconvergence_reports_history(params):
    # a stall in the Newton iteration surfaces the residual trace
    with pytest.raises(TrimNotConverged) as exc:
        trim_forward(params, (5.0, 0.0, 0.0), tol=0.0)
    assert len(exc.value.residual_history) > 1
    assert exc.value.exit_code == 3
