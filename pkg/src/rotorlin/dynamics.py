"""Rigid-body equations of motion with optional flapping states."""

from __future__ import annotations

import math
from dataclasses import astuple, dataclass

import numpy as np

from .airframe import compute_loads
from .errors import InputError, NumericalError
from .rotor import FlappingState, flapping_partials, flapping_rates

STATE_LABELS = ("u", "v", "w", "p", "q", "r", "phi", "theta", "psi")
FLAP_LABELS = ("a1s", "b1s")
INPUT_LABELS = ("d_coll", "d_ped", "d_lat", "d_long")


class KinematicSingularity(NumericalError):
    """Pitch attitude at or beyond +-90 deg, where Euler kinematics break down."""

    def __init__(self, theta):
        super().__init__(f"Euler kinematics singular at theta = {theta!r} rad")
        self.theta = theta


class ControlLimitExceeded(InputError):
    def __init__(self, name, value, limit):
        super().__init__(f"control {name} = {value!r} outside +-{limit}")


@dataclass(frozen=True)
class FlightState:
    """Body velocities (m/s), rates (rad/s), Euler angles and flapping (rad).

    ``a1s`` and ``b1s`` are ``None`` for the quasi-steady model.
    """

    u: float = 0.0
    v: float = 0.0
    w: float = 0.0
    p: float = 0.0
    q: float = 0.0
    r: float = 0.0
    phi: float = 0.0
    theta: float = 0.0
    psi: float = 0.0
    a1s: float | None = None
    b1s: float | None = None

    @property
    def augmented(self):
        return self.a1s is not None

    @property
    def labels(self):
        return STATE_LABELS + FLAP_LABELS if self.augmented else STATE_LABELS

    def as_array(self):
        vals = astuple(self)
        return np.array(vals if self.augmented else vals[:9], dtype=float)

    @classmethod
    def from_array(cls, x):
        x = [float(v) for v in x]
        if len(x) not in (9, 11):
            raise ValueError(f"state vector must have 9 or 11 entries, got {len(x)}")
        return cls(*x)

    def with_flapping(self, flap):
        return FlightState(*astuple(self)[:9], flap.a1s, flap.b1s)

    def without_flapping(self):
        return FlightState(*astuple(self)[:9])


@dataclass(frozen=True)
class ControlInput:
    """Blade-pitch commands, rad."""

    d_coll: float = 0.0
    d_ped: float = 0.0
    d_lat: float = 0.0
    d_long: float = 0.0

    def as_array(self):
        return np.array(astuple(self), dtype=float)

    @classmethod
    def from_array(cls, x):
        return cls(*(float(v) for v in x))

    def check_limits(self, limit):
        for name, val in zip(INPUT_LABELS, astuple(self)):
            if abs(val) > limit:
                raise ControlLimitExceeded(name, val, limit)
        return self


def kinematics(p, q, r, phi, theta):
    """Euler-angle rates ``(phi_dot, theta_dot, psi_dot)``."""
    if abs(theta) >= 0.5 * math.pi:
        raise KinematicSingularity(theta)
    sphi, cphi = math.sin(phi), math.cos(phi)
    ct = math.cos(theta)
    rot = q * sphi + r * cphi
    return p + rot * math.tan(theta), q * cphi - r * sphi, rot / ct


def rigid_body_accelerations(fm, state, params):
    """Translational and angular accelerations from body loads."""
    X, Y, Z, L, M, N = fm
    u, v, w, p, q, r = state.u, state.v, state.w, state.p, state.q, state.r
    m = params.m
    Ixx, Iyy, Izz = params.Ixx, params.Iyy, params.Izz
    return (X / m - q * w + r * v,
            Y / m - r * u + p * w,
            Z / m - p * v + q * u,
            (L + (Iyy - Izz) * q * r) / Ixx,
            (M + (Izz - Ixx) * p * r) / Iyy,
            (N + (Ixx - Iyy) * p * q) / Izz)


def state_derivative(state, controls, params):
    """Time derivative of the flight state.

    Parameters
    ----------
    state : FlightState
        With flapping angles the 11-state augmented model is used; without
        them flapping is replaced by its steady solution.
    controls : ControlInput
    params : VehicleParams

    Returns
    -------
    FlightState
        Field-wise derivatives, same shape as ``state``.

    Raises
    ------
    KinematicSingularity
        ``|theta| >= pi/2``.
    """
    if abs(state.theta) >= 0.5 * math.pi:
        raise KinematicSingularity(state.theta)
    flap = FlappingState(state.a1s, state.b1s) if state.augmented else None
    loads = compute_loads(state, controls, params, flap)
    acc = rigid_body_accelerations(loads.total.as_array(), state, params)
    kin = kinematics(state.p, state.q, state.r, state.phi, state.theta)
    if not state.augmented:
        return FlightState(*acc, *kin)
    main_air = loads.main_sol.air
    da, db = flapping_rates(flap, main_air, (state.p, state.q), (controls.d_lat, controls.d_long),
                            params, flapping_partials(loads.main_sol, params))
    return FlightState(*acc, *kin, da, db)


def derivative_vector(x, u, params):
    """Array form of :func:`state_derivative` for 9- or 11-element ``x``."""
    return state_derivative(FlightState.from_array(x), ControlInput.from_array(u), params).as_array()
