import math

import numpy as np
import pytest

from rotorlin import reference as ref
from rotorlin.errors import InputError
from rotorlin.linearize import decouple
from rotorlin.modal import eigen_analysis
from rotorlin.sim import (GridError, InputScript, NonlinearModel, ScriptError, Trajectory, compare,
                          integrate, integrate_ode, rk4_step)


def _traj(states, dt=0.01, labels=("u", "q")):
    states = np.asarray(states, dtype=float)
    n = len(states)
    return Trajectory(np.arange(n) * dt, states, np.zeros((n, 4)), labels, "test", dt)


def test_rk4_single_step_exponential():
    x = rk4_step(lambda x, t: -x, np.array([1.0]), 0.0, 0.1)
    # fourth-order Taylor polynomial of exp(-0.1)
    assert x[0] == pytest.approx(1 - 0.1 + 0.005 - 0.1 ** 3 / 6 + 0.1 ** 4 / 24, rel=1e-15)


def test_integrator_order():
    f = lambda x, t: np.array([x[1], -x[0] - 0.3 * x[1] ** 3 + math.cos(t)])
    x0 = np.array([1.0, 0.0])
    dt0 = 0.1
    _, ref_states = integrate_ode(f, x0, 4.0, dt0 / 16)
    errs = []
    for k in (1, 2, 4):
        _, xs = integrate_ode(f, x0, 4.0, dt0 / k)
        errs.append(np.linalg.norm(xs[-1] - ref_states[-1]))
    slope = np.polyfit(np.log([dt0, dt0 / 2, dt0 / 4]), np.log(errs), 1)[0]
    assert slope == pytest.approx(4.0, abs=0.3)


def test_time_reversibility_point_mass():
    g = 9.80665
    f = lambda x, t: np.array([x[2], x[3], 0.0, g])
    x0 = np.array([0.0, 0.0, 3.0, -5.0])
    _, fwd = integrate_ode(f, x0, 2.0, 1e-3)
    _, back = integrate_ode(lambda x, t: -f(x, t), fwd[-1], 2.0, 1e-3)
    assert np.max(np.abs(back[-1] - x0)) < 1e-8


def test_script_parsing():
    s = InputScript.parse("""
        # time channel value [kind]
        0.5 d_long 0.01
        1.0 d_long -0.01 step
        2.0 d_coll 0.02 ramp
    """)
    assert s(0.0)[3] == 0.0
    assert s(0.75)[3] == 0.01
    assert s(1.5)[3] == -0.01
    assert s(1.0)[0] == pytest.approx(0.01)
    assert s(3.0)[0] == 0.02


@pytest.mark.parametrize("text", ["0.5 d_yaw 0.01", "0.5 d_long", "x d_long 1", "0 d_long 1 spline",
                                  "-1 d_long 1"])
def test_script_errors(text):
    with pytest.raises(ScriptError):
        InputScript.parse(text)


def test_doublet_shape():
    s = InputScript.doublet("d_long", 0.01, 0.5)
    assert [s(t)[3] for t in (0.0, 0.49, 0.5, 0.99, 1.0, 1.5)] == [0.01, 0.01, -0.01, -0.01, 0.0, 0.0]


def test_nonlinear_equilibrium(hover, params):
    model = NonlinearModel(params, hover.controls.as_array())
    traj = integrate(model, hover.state.as_array()[:9], InputScript(), 5.0, 1e-3)
    assert traj.halt_reason is None
    assert len(traj.times) == 5001
    assert np.max(np.abs(traj.states - traj.states[0])) < 1e-6


def test_linear_zero_input_stays_at_trim(hover_model):
    x0 = hover_model.trim.state.as_array()[:9]
    traj = integrate(hover_model, x0, InputScript(), 2.0, 1e-2)
    assert np.all(traj.states == x0)
    assert traj.model_tag == "linear(hover)"


@pytest.mark.parametrize("matrix,labels", [(ref.HOVER_A_LAT, ref.LAT_STATES), (None, None)])
def test_unstable_mode_growth(matrix, labels, params, hover_model):
    if matrix is None:
        sub = decouple(hover_model).lat_dir
        matrix, labels = sub.a_matrix, sub.state_labels
    a = np.asarray(matrix, dtype=float)
    rep = eigen_analysis(a)
    mode = max(rep.modes, key=lambda m: m.eigenvalue.real)
    lam = mode.eigenvalue.real
    assert lam > 0 and mode.eigenvalue.imag == 0
    v = mode.eigenvector.real
    times, xs = integrate_ode(lambda x, t: a @ x, 1e-3 * v, 5.0, 1e-3)
    growth = np.linalg.norm(xs, axis=1) / np.linalg.norm(xs[0])
    np.testing.assert_allclose(growth, np.exp(lam * times), rtol=0.01)


def test_unstable_mode_growth_published_rate(params):
    rep = eigen_analysis(ref.HOVER_A_LAT)
    lam = max(m.eigenvalue.real for m in rep.modes)
    assert lam == pytest.approx(0.108, rel=0.01)


def test_augmented_step_limit(hover, params):
    model = NonlinearModel(params, hover.controls.as_array(), augmented=True)
    with pytest.raises(InputError):
        integrate(model, hover.state.as_array(), InputScript(), 0.1, 0.02)


def test_wrong_state_length(hover, params):
    with pytest.raises(InputError):
        integrate(NonlinearModel(params, hover.controls.as_array()), np.zeros(11), InputScript(), 0.1)


def test_halts_at_singularity(hover, params):
    x0 = hover.state.as_array()[:9].copy()
    x0[7] = 1.565
    x0[4] = 2.0
    traj = integrate(NonlinearModel(params, hover.controls.as_array()), x0, InputScript(), 1.0, 1e-3)
    assert traj.halt_reason is not None
    assert len(traj.times) < 1001
    assert np.all(np.abs(traj.column("theta")) < math.pi / 2)


def test_compare_identical():
    a = _traj(np.random.default_rng(0).normal(size=(20, 2)))
    res = compare(a, a)
    assert all(r.rms == 0.0 and r.peak_difference == 0.0 and r.time_to_10pct is None for r in res.values())


def test_compare_constant_offset():
    base = np.column_stack([np.sin(np.linspace(0, 3, 50)), np.cos(np.linspace(0, 3, 50))])
    shifted = base.copy()
    shifted[:, 1] += 0.25
    res = compare(_traj(base), _traj(shifted))
    assert res["u"].rms == 0.0
    assert res["q"].rms == pytest.approx(0.25, rel=1e-12)
    assert res["q"].peak_difference == pytest.approx(0.25, rel=1e-12)


def test_compare_grid_mismatch():
    with pytest.raises(GridError):
        compare(_traj(np.zeros((10, 2))), _traj(np.zeros((11, 2))))
    with pytest.raises(GridError):
        compare(_traj(np.zeros((10, 2))), _traj(np.zeros((10, 2)), dt=0.02))
    with pytest.raises(GridError):
        compare(_traj(np.zeros((10, 2))), _traj(np.zeros((10, 2)), labels=("u", "r")))


def test_csv_roundtrip(hover_model):
    x0 = hover_model.trim.state.as_array()[:9]
    traj = integrate(hover_model, x0, InputScript.doublet("d_long", 0.01, 0.05), 0.2, 1e-2)
    back = Trajectory.from_csv(traj.to_csv("note"))
    np.testing.assert_array_equal(back.states, traj.states)
    np.testing.assert_array_equal(back.controls, traj.controls)
    assert back.state_labels == traj.state_labels
    assert back.dt == pytest.approx(traj.dt)
