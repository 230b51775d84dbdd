"""Vehicle parameter set: parsing, validation, serialization and calibration.

The configuration format is a flat ``key = value`` text document with ``#``
comments. Every field of :class:`VehicleParams` is a required key; the
optional ``completed`` key lists the parameters that were back-solved by
:func:`complete_parameters`.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field, fields
from importlib import resources
from pathlib import Path

from .errors import ConvergenceError, InputError


class MissingParameter(InputError):
    """A required configuration key is absent."""

    def __init__(self, name):
        super().__init__(f"missing parameter: {name}")
        self.name = name


class InvalidParameter(InputError):
    """A parameter violates one of the physical invariants."""

    def __init__(self, name, value, constraint):
        super().__init__(f"invalid parameter {name} = {value!r}: {constraint}")
        self.name = name
        self.value = value
        self.constraint = constraint


class CalibrationFailed(ConvergenceError):
    """A back-solved parameter came out non-physical."""

    def __init__(self, parameter, reason):
        super().__init__(f"calibration of {parameter} failed: {reason}")
        self.parameter = parameter
        self.reason = reason


# name -> (unit, description)
_FIELD_DOCS = {
    "m": ("kg", "vehicle mass"),
    "Ixx": ("kg m^2", "roll inertia"),
    "Iyy": ("kg m^2", "pitch inertia"),
    "Izz": ("kg m^2", "yaw inertia"),
    "mr_radius": ("m", "main rotor radius"),
    "mr_chord": ("m", "main rotor chord"),
    "mr_blades": ("-", "main rotor blade count"),
    "mr_omega_nom": ("rad/s", "nominal main rotor speed"),
    "mr_lift_slope": ("1/rad", "main rotor blade lift-curve slope"),
    "mr_cd0": ("-", "main rotor profile drag coefficient"),
    "mr_kbeta": ("N m/rad", "hub stiffness"),
    "mr_tau_c": ("s", "flapping time constant"),
    "mr_a_dlong": ("rad/rad", "longitudinal cyclic to a1s gain"),
    "mr_b_dlat": ("rad/rad", "lateral cyclic to b1s gain"),
    "mr_kmu": ("-", "flapping speed-derivative gain"),
    "tr_radius": ("m", "tail rotor radius"),
    "tr_chord": ("m", "tail rotor chord"),
    "tr_blades": ("-", "tail rotor blade count"),
    "tr_gear_ratio": ("-", "tail to main rotor speed ratio"),
    "tr_lift_slope": ("1/rad", "tail rotor blade lift-curve slope"),
    "tr_cd0": ("-", "tail rotor profile drag coefficient"),
    "h_mr": ("m", "main rotor hub height above c.g."),
    "l_tr": ("m", "tail rotor hub distance behind c.g."),
    "h_tr": ("m", "tail rotor hub height above c.g."),
    "s_vf": ("m^2", "vertical fin area"),
    "s_hf": ("m^2", "horizontal fin area"),
    "s_fus_x": ("m^2", "fuselage flat-plate area, x axis (assumed)"),
    "s_fus_y": ("m^2", "fuselage flat-plate area, y axis (assumed)"),
    "s_fus_z": ("m^2", "fuselage flat-plate area, z axis (assumed)"),
    "rho": ("kg/m^3", "air density"),
    "g": ("m/s^2", "gravitational acceleration"),
    "eta_w": ("-", "wake efficiency"),
    "control_limit": ("rad", "actuator limit applied to every control"),
}

_POSITIVE = (
    "m", "Ixx", "Iyy", "Izz", "mr_radius", "mr_chord", "mr_blades", "mr_omega_nom",
    "mr_lift_slope", "mr_tau_c", "tr_radius", "tr_chord", "tr_blades", "tr_gear_ratio",
    "tr_lift_slope", "s_vf", "s_hf", "s_fus_x", "s_fus_y", "s_fus_z", "rho", "g",
    "control_limit",
)
_NONNEGATIVE = ("mr_cd0", "tr_cd0", "mr_kbeta", "mr_kmu", "h_mr", "h_tr")
_INTEGER = ("mr_blades", "tr_blades")


@dataclass(frozen=True)
class VehicleParams:
    """Immutable physical parameter set for one vehicle.

    All quantities are SI. Derived rotor quantities are exposed as
    properties so they always agree with the stored fields.
    """

    m: float
    Ixx: float
    Iyy: float
    Izz: float
    mr_radius: float
    mr_chord: float
    mr_blades: int
    mr_omega_nom: float
    mr_lift_slope: float
    mr_cd0: float
    mr_kbeta: float
    mr_tau_c: float
    mr_a_dlong: float
    mr_b_dlat: float
    mr_kmu: float
    tr_radius: float
    tr_chord: float
    tr_blades: int
    tr_gear_ratio: float
    tr_lift_slope: float
    tr_cd0: float
    h_mr: float
    l_tr: float
    h_tr: float
    s_vf: float
    s_hf: float
    s_fus_x: float
    s_fus_y: float
    s_fus_z: float
    rho: float
    g: float
    eta_w: float
    control_limit: float = 0.25
    completed: tuple = field(default=(), compare=False)

    def __post_init__(self):
        validate(self)

    # main rotor
    @property
    def mr_solidity(self):
        return self.mr_blades * self.mr_chord / (math.pi * self.mr_radius)

    @property
    def mr_disc_area(self):
        return math.pi * self.mr_radius ** 2

    @property
    def mr_tip_speed(self):
        return self.mr_omega_nom * self.mr_radius

    # tail rotor
    @property
    def tr_omega(self):
        return self.mr_omega_nom * self.tr_gear_ratio

    @property
    def tr_solidity(self):
        return self.tr_blades * self.tr_chord / (math.pi * self.tr_radius)

    @property
    def tr_disc_area(self):
        return math.pi * self.tr_radius ** 2

    @property
    def tr_tip_speed(self):
        return self.tr_omega * self.tr_radius

    @property
    def fin_blockage(self):
        """Tail thrust multiplier from vertical-fin blockage."""
        return 1.0 - 0.75 * self.s_vf / self.tr_disc_area

    @property
    def wake_bounds(self):
        """Wake-geometry ratios ``(g_i, g_f)`` bounding main-rotor wake impingement on the tail."""
        gi = (self.l_tr - self.mr_radius - self.tr_radius) / self.h_tr
        gf = (self.l_tr - self.mr_radius + self.tr_radius) / self.h_tr
        return gi, gf

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)


def validate(p):
    """Check every invariant of a parameter set, raising :class:`InvalidParameter`."""
    for name in _FIELD_DOCS:
        val = getattr(p, name)
        if not isinstance(val, (int, float)) or isinstance(val, bool) or not math.isfinite(val):
            raise InvalidParameter(name, val, "must be a finite number")
    for name in _POSITIVE:
        if getattr(p, name) <= 0:
            raise InvalidParameter(name, getattr(p, name), "must be > 0")
    for name in _NONNEGATIVE:
        if getattr(p, name) < 0:
            raise InvalidParameter(name, getattr(p, name), "must be >= 0")
    for name in _INTEGER:
        if int(getattr(p, name)) != getattr(p, name):
            raise InvalidParameter(name, getattr(p, name), "must be an integer")
    if not 0.0 < p.eta_w <= 1.0:
        raise InvalidParameter("eta_w", p.eta_w, "must lie in (0, 1]")
    if p.l_tr <= p.mr_radius:
        raise InvalidParameter("l_tr", p.l_tr, "tail rotor must sit behind the main disc (l_tr > mr_radius)")
    if p.h_tr <= 0:
        raise InvalidParameter("h_tr", p.h_tr, "must be > 0")
    for name in ("mr_solidity", "tr_solidity"):
        s = getattr(p, name)
        if not 0.0 < s < 0.2:
            raise InvalidParameter(name, s, "solidity must lie in (0, 0.2)")
    if p.fin_blockage <= 0:
        raise InvalidParameter("s_vf", p.s_vf, "fin area exceeds the tail disc blockage limit")


def _parse_value(name, raw):
    try:
        if name in _INTEGER:
            val = float(raw)
            return int(val) if val == int(val) else val
        return float(raw)
    except ValueError:
        raise InvalidParameter(name, raw, "not a number") from None


def load_config(text):
    """Parse a configuration document into validated parameters.

    Parameters
    ----------
    text : str
        Document with one ``key = value`` pair per line.

    Returns
    -------
    VehicleParams

    Raises
    ------
    MissingParameter
        A required key is absent.
    InvalidParameter
        A value is malformed, unknown, or violates an invariant.
    """
    values = {}
    completed = ()
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidParameter(f"line {lineno}", line, "expected 'key = value'")
        key, raw = (s.strip() for s in line.split("=", 1))
        if key == "completed":
            completed = tuple(k.strip() for k in raw.split(",") if k.strip())
            continue
        if key not in _FIELD_DOCS:
            raise InvalidParameter(key, raw, "unknown key")
        values[key] = _parse_value(key, raw)
    for name in _FIELD_DOCS:
        if name not in values and name != "control_limit":
            raise MissingParameter(name)
    return VehicleParams(**values, completed=completed)


def load_config_file(path):
    return load_config(Path(path).read_text(encoding="utf-8"))


def default_config_text():
    return resources.files("rotorlin").joinpath("data/xcell60.cfg").read_text(encoding="utf-8")


def default_params():
    """Completed X-Cell .60 parameter set shipped with the package."""
    return load_config(default_config_text())


def dump_config(p):
    """Serialize parameters to the configuration format.

    Floats are written with ``repr`` so :func:`load_config` reproduces them
    bit for bit.
    """
    width = max(len(k) for k in _FIELD_DOCS)
    lines = ["# rotorlin vehicle configuration (SI units)"]
    for f in fields(p):
        if f.name == "completed":
            continue
        unit, desc = _FIELD_DOCS[f.name]
        lines.append(f"{f.name:<{width}} = {getattr(p, f.name)!r:<22} # [{unit}] {desc}")
    if p.completed:
        lines.append(f"{'completed':<{width}} = {', '.join(p.completed)}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class HoverTargets:
    """Published hover trim quantities used to back-solve unknown constants.

    ``pitch_damping`` is the quasi-steady (q, q) entry of the hover
    longitudinal system matrix, 1/s; it fixes the hub stiffness. Set it to
    ``None`` to keep the stiffness from the base parameters.
    """

    thrust: float
    ct: float
    cq: float
    induced_velocity: float
    collective: float
    tail_thrust: float
    tail_ct: float
    tail_cq: float
    tail_induced_velocity: float
    tail_collective: float
    pitch_damping: float | None = None


XCELL_HOVER_TARGETS = HoverTargets(
    thrust=81.616, ct=0.002256, cq=0.0002228, induced_velocity=4.582, collective=0.1047,
    tail_thrust=6.8656, tail_ct=0.01329, tail_cq=0.001568, tail_induced_velocity=8.693,
    tail_collective=0.2412, pitch_damping=-21.5235,
)


def _require_positive(name, value, reason):
    if not (math.isfinite(value) and value > 0):
        raise CalibrationFailed(name, f"{reason} gave {value!r}")
    return value


def complete_parameters(base, targets=XCELL_HOVER_TARGETS):
    """Back-solve the unpublished constants from hover trim targets.

    Each value is a closed-form inversion of one hover relation (zero
    advance ratio, zero climb):

    * ``rho`` from thrust and thrust coefficient,
    * ``eta_w`` from the momentum relation with the measured inflow,
    * ``mr_lift_slope`` from the thrust-coefficient expression at the
      trim collective,
    * ``mr_cd0`` from the torque coefficient,
    * ``tr_gear_ratio`` from the tail thrust with fin blockage applied,
    * ``tr_lift_slope`` and ``tr_cd0`` from the tail coefficients,
    * ``mr_kbeta`` from the pitch damping, which at hover equals
      ``-(K_beta + T h) tau_c / Iyy``.

    Parameters
    ----------
    base : VehicleParams
    targets : HoverTargets

    Returns
    -------
    VehicleParams
        Copy of ``base`` with the calibrated fields replaced.

    Raises
    ------
    CalibrationFailed
        An inversion produced a non-physical value.
    """
    t = targets
    sig = base.mr_solidity
    tip = base.mr_tip_speed
    rho = _require_positive("rho", t.thrust / (tip ** 2 * base.mr_disc_area * t.ct), "thrust inversion")
    lam = t.induced_velocity / tip
    eta_w = t.ct / (2.0 * lam * lam)
    if not 0.0 < eta_w <= 1.0:
        raise CalibrationFailed("eta_w", f"momentum inversion gave {eta_w!r}, outside (0, 1]")
    a_mr = _require_positive("mr_lift_slope",
                             2.0 * t.ct / (sig * (t.collective / 3.0 - 0.5 * lam)),
                             "thrust-coefficient inversion")
    cd0 = _require_positive("mr_cd0", 8.0 * (t.cq - lam * t.ct) / sig, "torque inversion")

    ft = base.fin_blockage
    area_t = base.tr_disc_area
    n_tr = _require_positive(
        "tr_gear_ratio",
        math.sqrt(t.tail_thrust / (ft * rho * area_t * t.tail_ct)) / (base.mr_omega_nom * base.tr_radius),
        "tail thrust inversion")
    tip_t = base.mr_omega_nom * n_tr * base.tr_radius
    lam_t = t.tail_induced_velocity / tip_t
    sig_t = base.tr_solidity
    a_tr = _require_positive("tr_lift_slope",
                             2.0 * t.tail_ct / (sig_t * (t.tail_collective / 3.0 - 0.5 * lam_t)),
                             "tail thrust-coefficient inversion")
    cd0_tr = _require_positive("tr_cd0", 8.0 * (t.tail_cq - lam_t * t.tail_ct) / sig_t,
                               "tail torque inversion")

    changes = dict(rho=rho, eta_w=eta_w, mr_lift_slope=a_mr, mr_cd0=cd0,
                   tr_gear_ratio=n_tr, tr_lift_slope=a_tr, tr_cd0=cd0_tr)
    if t.pitch_damping is not None:
        kbeta = -base.Iyy * t.pitch_damping / base.mr_tau_c - t.thrust * base.h_mr
        changes["mr_kbeta"] = _require_positive("mr_kbeta", kbeta, "pitch-damping inversion")
    completed = tuple(sorted(set(base.completed) | set(changes)))
    return base.replace(**changes, completed=completed)
