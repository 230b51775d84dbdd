"""Equilibrium solver for hover and straight forward flight."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .airframe import compute_loads
from .dynamics import ControlInput, FlightState, state_derivative
from .errors import ConvergenceError, InputError
from .fd import jacobian

TRIM_TOL = 1e-10
MU_MAX = 0.15
UNKNOWNS = ("d_coll", "d_ped", "d_lat", "d_long", "phi", "theta")


class TrimNotConverged(ConvergenceError):
    """Newton iteration stalled before reaching the residual tolerance."""

    def __init__(self, residual_history):
        super().__init__(
            f"trim did not converge; last residual {residual_history[-1]:.3g} "
            f"after {len(residual_history) - 1} iterations")
        self.residual_history = list(residual_history)


class MuOutOfRange(InputError):
    """Requested airspeed exceeds the validity range of the rotor model."""

    def __init__(self, mu, limit=MU_MAX):
        super().__init__(f"advance ratio {mu:.4f} exceeds model limit {limit}")
        self.mu = mu
        self.limit = limit


@dataclass(frozen=True)
class TrimPoint:
    """Equilibrium of the quasi-steady model.

    ``state`` carries the steady flapping angles so it can seed the
    augmented model directly.
    """

    state: FlightState
    controls: ControlInput
    main_sol: object
    tail_sol: object
    residual_norm: float
    condition_label: str
    iterations: int
    residual_history: tuple

    @property
    def velocity(self):
        return (self.state.u, self.state.v, self.state.w)


def _state(velocity, phi, theta):
    u, v, w = velocity
    return FlightState(u, v, w, 0.0, 0.0, 0.0, phi, theta, 0.0)


def _residual(z, velocity, params):
    st = _state(velocity, z[4], z[5])
    d = state_derivative(st, ControlInput(*z[:4]), params)
    return np.array([d.u, d.v, d.w, d.p, d.q, d.r])


def initial_guess(params):
    """Collectives from momentum theory and yaw balance; zero cyclic and attitude."""
    tip = params.mr_tip_speed
    area = params.mr_disc_area
    ct = params.m * params.g / (params.rho * area * tip ** 2)
    lam = math.sqrt(ct / (2.0 * params.eta_w))
    coll = 3.0 * (2.0 * ct / (params.mr_lift_slope * params.mr_solidity) + 0.5 * lam)
    cq = params.mr_solidity / 8.0 * params.mr_cd0 + lam * ct
    torque = params.rho * area * tip ** 2 * params.mr_radius * cq
    tip_t = params.tr_tip_speed
    area_t = params.tr_disc_area
    ct_t = torque / params.l_tr / (params.fin_blockage * params.rho * area_t * tip_t ** 2)
    lam_t = math.sqrt(abs(ct_t) / (2.0 * params.eta_w))
    ped = 3.0 * (2.0 * ct_t / (params.tr_lift_slope * params.tr_solidity) + 0.5 * lam_t)
    return np.array([coll, ped, 0.0, 0.0, 0.0, 0.0])


def _newton(velocity, params, z0, tol, max_iter=50):
    f = lambda z: _residual(z, velocity, params)
    z = np.array(z0, dtype=float)
    r = f(z)
    history = [float(np.linalg.norm(r))]
    best = history[0]
    since_best = 0
    it = 0
    while history[-1] > tol and it < max_iter:
        it += 1
        J = jacobian(f, z, [1e-5] * 6)
        try:
            dz = np.linalg.solve(J, -r)
        except np.linalg.LinAlgError:
            raise TrimNotConverged(history) from None
        step = 1.0
        for _ in range(12):
            zn = z + step * dz
            rn = f(zn)
            if np.linalg.norm(rn) < history[-1]:
                break
            step *= 0.5
        z, r = zn, rn
        history.append(float(np.linalg.norm(r)))
        if history[-1] < best:
            best = history[-1]
            since_best = 0
        else:
            since_best += 1
            if since_best >= 10:
                raise TrimNotConverged(history)
    if history[-1] > tol:
        raise TrimNotConverged(history)
    return z, history


def _build(velocity, params, z, history, label):
    st = _state(velocity, float(z[4]), float(z[5]))
    ctrl = ControlInput(*(float(c) for c in z[:4]))
    loads = compute_loads(st, ctrl, params)
    return TrimPoint(st.with_flapping(loads.flap), ctrl, loads.main_sol, loads.tail_sol,
                     history[-1], label, len(history) - 1, tuple(history))


def trim_forward(params, velocity, tol=TRIM_TOL, guess=None):
    """Trim at prescribed body velocity with zero angular rates.

    Parameters
    ----------
    params : VehicleParams
    velocity : tuple of float
        Body velocity ``(u, v, w)``, m/s.
    tol : float
        Residual norm target (accelerations in m/s^2 and rad/s^2).
    guess : array_like, optional
        Starting point over ``UNKNOWNS``.

    Returns
    -------
    TrimPoint

    Raises
    ------
    MuOutOfRange
        In-plane speed beyond the rotor model's advance-ratio limit.
    TrimNotConverged
        Newton iteration stalled.
    """
    velocity = tuple(float(c) for c in velocity)
    mu = math.hypot(velocity[0], velocity[1]) / params.mr_tip_speed
    if mu > MU_MAX:
        raise MuOutOfRange(mu)
    z0 = initial_guess(params) if guess is None else guess
    z, history = _newton(velocity, params, z0, tol)
    if velocity == (0.0, 0.0, 0.0):
        label = "hover"
    else:
        label = "forward({:g}, {:g}, {:g})".format(*velocity)
    return _build(velocity, params, z, history, label)


def trim_hover(params, tol=TRIM_TOL):
    """Trim with zero body velocity and zero rates."""
    return trim_forward(params, (0.0, 0.0, 0.0), tol)


def trim_unknowns(tp):
    """Solver unknowns of a trim point, ordered as ``UNKNOWNS``."""
    c = tp.controls
    return np.array([c.d_coll, c.d_ped, c.d_lat, c.d_long, tp.state.phi, tp.state.theta])
