"""Main and tail rotor: momentum inflow, thrust, torque and quasi-steady flapping."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from . import kernels
from .errors import ConvergenceError

INFLOW_TOL = 1e-13
MAX_ITER = 100


class InflowDiverged(ConvergenceError):
    """The thrust/inflow iteration did not converge."""

    def __init__(self, mu, mu_z, last_residual):
        super().__init__(
            f"inflow iteration diverged at mu={mu:.6g}, mu_z={mu_z:.6g} "
            f"(residual {last_residual:.3g})")
        self.mu = mu
        self.mu_z = mu_z
        self.last_residual = last_residual


@dataclass(frozen=True)
class AirVelocity:
    """Air-relative velocity at a rotor hub in body axes, m/s."""

    u_a: float
    v_a: float
    w_a: float


class RotorGeometry(NamedTuple):
    """The per-rotor constants needed by the inflow and torque relations."""

    radius: float
    solidity: float
    lift_slope: float
    cd0: float
    eta_w: float
    rho: float
    thrust_factor: float = 1.0


def main_rotor(params):
    return RotorGeometry(params.mr_radius, params.mr_solidity, params.mr_lift_slope,
                         params.mr_cd0, params.eta_w, params.rho)


def tail_rotor(params, blockage=True):
    return RotorGeometry(params.tr_radius, params.tr_solidity, params.tr_lift_slope,
                         params.tr_cd0, params.eta_w, params.rho,
                         params.fin_blockage if blockage else 1.0)


@dataclass(frozen=True)
class RotorSolution:
    """Converged operating point of one rotor.

    ``thrust`` includes any blockage factor; ``torque`` does not.
    """

    thrust: float
    torque: float
    ct: float
    cq: float
    induced_velocity: float
    lambda0: float
    mu: float
    mu_z: float
    iterations: int
    residual: float
    collective: float
    omega: float
    air: AirVelocity
    wake_factor: float = 0.0


@dataclass(frozen=True)
class FlappingState:
    """Tip-path-plane tilt, rad."""

    a1s: float
    b1s: float


class FlappingPartials(NamedTuple):
    """Speed derivatives of the steady flapping angles.

    ``da1s_dmu`` and ``da1s_dmuz`` are per unit advance/climb ratio;
    ``db1s_dmuv`` is the lateral counterpart.
    """

    da1s_dmu: float
    da1s_dmuz: float
    db1s_dmuv: float


def torque_coefficient(ct, lambda0, mu, mu_z, rotor):
    return rotor.solidity / 8.0 * (1.0 + 7.0 / 3.0 * mu * mu) * rotor.cd0 + (lambda0 - mu_z) * ct


def _solve(mu, mu_z, collective, omega, rotor, air, wake_factor=0.0):
    lam, ct, iters, res, ok = kernels.solve_inflow(
        mu, mu_z, collective, rotor.lift_slope, rotor.solidity, rotor.eta_w,
        INFLOW_TOL, MAX_ITER, 0.5)
    if not ok or not math.isfinite(lam):
        raise InflowDiverged(mu, mu_z, res)
    tip = omega * rotor.radius
    scale = rotor.rho * tip * tip * math.pi * rotor.radius ** 2
    cq = torque_coefficient(ct, lam, mu, mu_z, rotor)
    return RotorSolution(
        thrust=rotor.thrust_factor * scale * ct, torque=scale * rotor.radius * cq,
        ct=ct, cq=cq, induced_velocity=lam * tip, lambda0=lam, mu=mu, mu_z=mu_z,
        iterations=int(iters), residual=res, collective=collective, omega=omega,
        air=air, wake_factor=wake_factor)


def solve_rotor_inflow(air, collective, omega, rotor):
    """Solve the coupled thrust-coefficient and uniform-inflow relations.

    Parameters
    ----------
    air : AirVelocity
        Hub air velocity; ``w_a`` is positive along the thrust-opposing
        axis (body z for the main rotor).
    collective : float
        Blade pitch, rad.
    omega : float
        Rotor speed, rad/s.
    rotor : RotorGeometry

    Returns
    -------
    RotorSolution

    Raises
    ------
    InflowDiverged
        No fixed point within the iteration budget.
    """
    if omega <= 0:
        raise ValueError("rotor speed must be positive")
    tip = omega * rotor.radius
    mu = math.hypot(air.u_a, air.v_a) / tip
    mu_z = air.w_a / tip
    return _solve(mu, mu_z, collective, omega, rotor, air)


def rotor_torque(sol, rotor):
    """Shaft torque of a converged solution, N m."""
    cq = torque_coefficient(sol.ct, sol.lambda0, sol.mu, sol.mu_z, rotor)
    tip = sol.omega * rotor.radius
    return rotor.rho * tip * tip * math.pi * rotor.radius ** 3 * cq


def wake_factor(main_air, main_induced, params):
    """Fraction of main-rotor downwash reaching the tail rotor.

    The wake skew ratio ``u_a / (w_i - w_a)`` must fall between the
    geometric bounds of :attr:`VehicleParams.wake_bounds`; outside that
    band, or when the rotor is not pushing air down, the factor is zero.
    """
    den = main_induced - main_air.w_a
    if den <= 0.0:
        return 0.0
    ratio = main_air.u_a / den
    gi, gf = params.wake_bounds
    if not gi <= ratio <= gf:
        return 0.0
    return min(max(1.5 * ratio - gi, 0.0), 1.5)


def solve_tail_rotor(air, main_sol, pedal_collective, params, blockage=True):
    """Tail rotor operating point including main-rotor wake and fin blockage.

    Parameters
    ----------
    air : AirVelocity
        Air velocity at the tail hub in body axes. The disc normal is the
        body y axis, so ``v_a`` is the axial component and ``(u_a, w_a)``
        lie in the disc plane.
    main_sol : RotorSolution
        Main rotor solution; supplies the downwash and wake geometry.
    pedal_collective : float
        Tail blade pitch, rad.
    params : VehicleParams
    blockage : bool
        Apply the fin blockage factor to thrust.
    """
    rotor = tail_rotor(params, blockage)
    k = wake_factor(main_sol.air, main_sol.induced_velocity, params)
    omega = params.tr_omega
    tip = omega * rotor.radius
    mu = math.hypot(air.u_a, air.w_a - k * main_sol.induced_velocity) / tip
    mu_z = air.v_a / tip
    return _solve(mu, mu_z, pedal_collective, omega, rotor, air, k)


def flapping_partials(main_sol, params):
    """Speed derivatives of the steady flapping at a main-rotor operating point."""
    mu = main_sol.mu
    k = params.mr_kmu
    da_dmu = 2.0 * k * (4.0 * main_sol.collective / 3.0 - main_sol.lambda0)
    da_dmuz = k * 16.0 * mu * mu / ((1.0 - 0.5 * mu * mu) * (8.0 * mu + params.mr_lift_slope * params.mr_solidity))
    return FlappingPartials(da_dmu, da_dmuz, -da_dmu)


_NO_PARTIALS = FlappingPartials(0.0, 0.0, 0.0)


def flapping_steady(air, rates, cyclic, params, partials=None):
    """Steady tip-path-plane tilt for given hub air velocity, rates and cyclic.

    Parameters
    ----------
    air : AirVelocity
        Main hub air velocity.
    rates : tuple of float
        Body rates ``(p, q)``, rad/s.
    cyclic : tuple of float
        ``(d_lat, d_long)``, rad.
    params : VehicleParams
    partials : FlappingPartials, optional
        Speed derivatives; omitted means no speed dependence.

    Returns
    -------
    FlappingState
    """
    d = partials or _NO_PARTIALS
    tip = params.mr_tip_speed
    p, q = rates
    d_lat, d_long = cyclic
    tau = params.mr_tau_c
    a1s = d.da1s_dmu * air.u_a / tip + d.da1s_dmuz * air.w_a / tip - tau * q + params.mr_a_dlong * d_long
    b1s = -d.db1s_dmuv * air.v_a / tip - tau * p + params.mr_b_dlat * d_lat
    return FlappingState(a1s, b1s)


def flapping_rates(flap, air, rates, cyclic, params, partials=None):
    """First-order flapping dynamics ``(da1s/dt, db1s/dt)``, rad/s."""
    s = flapping_steady(air, rates, cyclic, params, partials)
    tau = params.mr_tau_c
    return (s.a1s - flap.a1s) / tau, (s.b1s - flap.b1s) / tau
