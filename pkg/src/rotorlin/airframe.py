"""Fuselage and fin drag, gravity, and assembly of the body-axis loads."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .rotor import (AirVelocity, FlappingState, flapping_partials, flapping_steady,
                    main_rotor, solve_rotor_inflow, solve_tail_rotor)


@dataclass(frozen=True)
class ForceMoment:
    """Body-axis force (N) and moment (N m) about the c.g."""

    X: float = 0.0
    Y: float = 0.0
    Z: float = 0.0
    L: float = 0.0
    M: float = 0.0
    N: float = 0.0

    def __add__(self, other):
        return ForceMoment(*(a + b for a, b in zip(self.as_array(), other.as_array())))

    def as_array(self):
        return np.array([self.X, self.Y, self.Z, self.L, self.M, self.N])

    @classmethod
    def from_array(cls, arr):
        return cls(*(float(x) for x in arr))

    @classmethod
    def force_at(cls, fx, fy, fz, x, y, z):
        """Force applied at body position ``(x, y, z)`` with its moment about the c.g."""
        return cls(fx, fy, fz, y * fz - z * fy, z * fx - x * fz, x * fy - y * fx)


def hub_air_velocities(state, params):
    """Main and tail hub air velocities for a flight state.

    ``state`` needs ``u, v, w, p, q, r`` attributes. Hubs sit at
    ``(0, 0, -h_mr)`` and ``(-l_tr, 0, -h_tr)``.
    """
    u, v, w, p, q, r = state.u, state.v, state.w, state.p, state.q, state.r
    h, l, ht = params.h_mr, params.l_tr, params.h_tr
    main = AirVelocity(u - q * h, v + p * h, w)
    tail = AirVelocity(u - q * ht, v - r * l + p * ht, w + q * l)
    return main, tail


def fuselage_fin_forces(air, main_sol, params, tail_air=None):
    """Quadratic flat-plate drag of the fuselage and both fins.

    Parameters
    ----------
    air : AirVelocity
        Air velocity at the c.g.
    main_sol : RotorSolution
        Supplies the downwash washing over the fuselage.
    params : VehicleParams
    tail_air : AirVelocity, optional
        Air velocity at the tail station; defaults to ``air``.

    Returns
    -------
    ForceMoment
    """
    tail_air = air if tail_air is None else tail_air
    half_rho = 0.5 * params.rho
    u, v = air.u_a, air.v_a
    # downwash moves down relative to the body, so the air meets the fuselage at w - w_i
    wr = air.w_a - main_sol.induced_velocity
    speed = math.sqrt(u * u + v * v + wr * wr)
    fus = ForceMoment(-half_rho * params.s_fus_x * u * speed,
                      -half_rho * params.s_fus_y * v * speed,
                      -half_rho * params.s_fus_z * wr * speed)
    ut, vt, wt = tail_air.u_a, tail_air.v_a, tail_air.w_a
    speed_t = math.sqrt(ut * ut + vt * vt + wt * wt)
    vfin = ForceMoment.force_at(0.0, -half_rho * params.s_vf * vt * speed_t, 0.0,
                                -params.l_tr, 0.0, -params.h_tr)
    hfin = ForceMoment.force_at(0.0, 0.0, -half_rho * params.s_hf * wt * speed_t,
                                -params.l_tr, 0.0, 0.0)
    return fus + vfin + hfin


def gravity_forces(phi, theta, params):
    mg = params.m * params.g
    return ForceMoment(-mg * math.sin(theta),
                       mg * math.sin(phi) * math.cos(theta),
                       mg * math.cos(phi) * math.cos(theta))


def main_rotor_forces(main_sol, flap, params):
    T = main_sol.thrust
    a, b = flap.a1s, flap.b1s
    return ForceMoment(-T * math.sin(a), T * math.sin(b), -T * math.cos(a) * math.cos(b),
                       params.mr_kbeta * b + T * params.h_mr * math.sin(b),
                       params.mr_kbeta * a + T * params.h_mr * math.sin(a),
                       -main_sol.torque)


def tail_rotor_forces(tail_sol, params):
    T = tail_sol.thrust
    return ForceMoment(0.0, -T, 0.0, -T * params.h_tr, -tail_sol.torque, T * params.l_tr)


class Loads(NamedTuple):
    """Total load and the pieces that produced it."""

    total: ForceMoment
    main_sol: object
    tail_sol: object
    flap: FlappingState
    main_rotor: ForceMoment
    tail_rotor: ForceMoment
    airframe: ForceMoment
    gravity: ForceMoment


def compute_loads(state, controls, params, flap=None):
    """Evaluate every load contributor at a flight state.

    Parameters
    ----------
    state : FlightState
    controls : ControlInput
    params : VehicleParams
    flap : FlappingState, optional
        Flapping to use; omitted means the quasi-steady solution.
    """
    main_air, tail_air = hub_air_velocities(state, params)
    main_sol = solve_rotor_inflow(main_air, controls.d_coll, params.mr_omega_nom, main_rotor(params))
    tail_sol = solve_tail_rotor(tail_air, main_sol, controls.d_ped, params)
    if flap is None:
        flap = flapping_steady(main_air, (state.p, state.q), (controls.d_lat, controls.d_long),
                               params, flapping_partials(main_sol, params))
    mr = main_rotor_forces(main_sol, flap, params)
    tr = tail_rotor_forces(tail_sol, params)
    af = fuselage_fin_forces(AirVelocity(state.u, state.v, state.w), main_sol, params, tail_air)
    grav = gravity_forces(state.phi, state.theta, params)
    return Loads(mr + tr + af + grav, main_sol, tail_sol, flap, mr, tr, af, grav)


def total_forces_moments(state, controls, params, flap=None):
    """Sum of rotor, airframe and gravity loads in body axes.

    If ``state`` carries flapping angles they are used directly, otherwise
    (or when ``flap`` is given) the quasi-steady flapping is used.

    Returns
    -------
    ForceMoment
    """
    if flap is None and getattr(state, "a1s", None) is not None:
        flap = FlappingState(state.a1s, state.b1s)
    return compute_loads(state, controls, params, flap).total
