"""Fixed-step time integration of the nonlinear and linear models."""

from __future__ import annotations

import csv
import io
import math
from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from .dynamics import INPUT_LABELS, STATE_LABELS, FLAP_LABELS, KinematicSingularity, derivative_vector
from .errors import InputError
from .linearize import LinearModel
from .rotor import InflowDiverged


class GridError(InputError):
    """Trajectories being compared do not share a time grid."""


class ScriptError(InputError):
    """Malformed input script."""


def rk4_step(f, x, t, dt):
    """One classical fourth-order Runge-Kutta step of ``dx/dt = f(x, t)``."""
    k1 = f(x, t)
    k2 = f(x + 0.5 * dt * k1, t + 0.5 * dt)
    k3 = f(x + 0.5 * dt * k2, t + 0.5 * dt)
    k4 = f(x + dt * k3, t + dt)
    return x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def integrate_ode(f, x0, t_end, dt):
    """Integrate ``dx/dt = f(x, t)`` from 0 to ``t_end``; returns ``(times, states)``."""
    n = int(round(t_end / dt))
    x = np.asarray(x0, dtype=float)
    out = np.empty((n + 1, x.size))
    out[0] = x
    for i in range(n):
        x = rk4_step(f, x, i * dt, dt)
        out[i + 1] = x
    return np.arange(n + 1) * dt, out


class InputScript:
    """Piecewise control perturbations.

    Each line reads ``time channel value [step|ramp]``. A ``step`` point
    holds its value until the next point of that channel; a ``ramp`` point
    is reached linearly from the previous point. Channels start at zero.
    Values are added to the reference controls.
    """

    def __init__(self, points=None):
        self._points = {ch: [] for ch in INPUT_LABELS}
        for t, ch, val, kind in points or ():
            self.add(t, ch, val, kind)

    def add(self, t, channel, value, kind="step"):
        if channel not in self._points:
            raise ScriptError(f"unknown channel {channel!r}")
        if kind not in ("step", "ramp"):
            raise ScriptError(f"unknown segment kind {kind!r}")
        if not (math.isfinite(t) and math.isfinite(value)) or t < 0:
            raise ScriptError(f"bad point ({t!r}, {value!r})")
        pts = self._points[channel]
        pts.append((float(t), float(value), kind))
        pts.sort(key=lambda p: p[0])

    @classmethod
    def parse(cls, text):
        script = cls()
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.replace(",", " ").split()
            if len(parts) not in (3, 4):
                raise ScriptError(f"line {lineno}: expected 'time channel value [step|ramp]'")
            try:
                t, val = float(parts[0]), float(parts[2])
            except ValueError:
                raise ScriptError(f"line {lineno}: non-numeric time or value") from None
            script.add(t, parts[1], val, parts[3] if len(parts) == 4 else "step")
        return script

    @classmethod
    def doublet(cls, channel, amplitude, half_period, start=0.0):
        return cls([(start, channel, amplitude, "step"),
                    (start + half_period, channel, -amplitude, "step"),
                    (start + 2 * half_period, channel, 0.0, "step")])

    def _channel(self, pts, t):
        if not pts:
            return 0.0
        k = bisect_right([p[0] for p in pts], t)
        if k < len(pts) and pts[k][2] == "ramp":
            t0, v0 = (pts[k - 1][0], pts[k - 1][1]) if k > 0 else (0.0, 0.0)
            t1, v1 = pts[k][0], pts[k][1]
            return v0 + (v1 - v0) * (t - t0) / (t1 - t0) if t1 > t0 else v1
        return pts[k - 1][1] if k > 0 else 0.0

    def __call__(self, t):
        return np.array([self._channel(self._points[ch], t) for ch in INPUT_LABELS])


@dataclass
class NonlinearModel:
    """Nonlinear model about reference controls.

    With ``augmented`` the state includes the flapping angles.
    """

    params: object
    controls: np.ndarray
    augmented: bool = False

    @property
    def state_labels(self):
        return STATE_LABELS + FLAP_LABELS if self.augmented else STATE_LABELS


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    controls: np.ndarray
    state_labels: tuple
    model_tag: str
    dt: float
    halt_reason: str | None = None

    def column(self, label):
        return self.states[:, self.state_labels.index(label)]

    def to_csv(self, header_comment=None):
        buf = io.StringIO()
        if header_comment:
            buf.write(f"# {header_comment}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("t",) + tuple(self.state_labels) + INPUT_LABELS)
        for t, x, u in zip(self.times, self.states, self.controls):
            w.writerow([repr(float(t))] + [repr(float(v)) for v in x] + [repr(float(v)) for v in u])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text, model_tag="file"):
        rows = [r for r in csv.reader(io.StringIO(text)) if r and not r[0].startswith("#")]
        if not rows:
            raise InputError("empty trajectory file")
        header = rows[0]
        if header[0] != "t":
            raise InputError("trajectory CSV must start with a 't' column")
        ctrl_idx = [header.index(c) for c in INPUT_LABELS if c in header]
        state_idx = [i for i in range(1, len(header)) if i not in ctrl_idx]
        try:
            data = np.array([[float(v) for v in r] for r in rows[1:]])
        except ValueError:
            raise InputError("non-numeric value in trajectory CSV") from None
        if data.size == 0:
            data = np.zeros((0, len(header)))
        times = data[:, 0]
        dt = float(times[1] - times[0]) if len(times) > 1 else 0.0
        controls = data[:, ctrl_idx] if ctrl_idx else np.zeros((len(times), 4))
        return cls(times, data[:, state_idx], controls, tuple(header[i] for i in state_idx), model_tag, dt)


def integrate(model, x0, script, t_end, dt=1e-3):
    """Fixed-step RK4 integration under scripted control perturbations.

    Parameters
    ----------
    model : NonlinearModel or LinearModel
        A linear model integrates the perturbation about its trim and
        reports absolute states.
    x0 : array_like
        Absolute initial state (length matching the model).
    script : InputScript or callable
        Control perturbation ``du(t)``.
    t_end, dt : float
        Horizon and step, s.

    Returns
    -------
    Trajectory
        Truncated with ``halt_reason`` set if the model leaves its validity
        domain.
    """
    x0 = np.asarray(x0, dtype=float)
    if dt <= 0 or t_end < 0:
        raise InputError("dt must be positive and t_end non-negative")
    if isinstance(model, LinearModel):
        labels = model.state_labels
        A, B = model.a_matrix, model.b_matrix
        x_ref = np.array([getattr(model.trim.state, s) for s in labels], dtype=float)
        u_ref = model.trim.controls.as_array()
        f = lambda dx, t: A @ dx + B @ script(t)
        start = x0 - x_ref
        tag = f"linear({model.trim.condition_label})"
    else:
        labels = model.state_labels
        u_ref = np.asarray(model.controls, dtype=float)
        x_ref = np.zeros(len(labels))
        f = lambda x, t: derivative_vector(x, u_ref + script(t), model.params)
        start = x0
        tag = "nonlinear"
    if x0.size != len(labels):
        raise InputError(f"initial state has {x0.size} entries, model needs {len(labels)}")
    if dt > 0.1 * getattr(getattr(model, "params", None), "mr_tau_c", math.inf) and len(labels) == 11:
        raise InputError("dt must resolve the flapping time constant (dt <= tau_c/10)")
    n = int(round(t_end / dt))
    states = [start + x_ref]
    controls = [u_ref + script(0.0)]
    x = start
    halt = None
    theta_i = labels.index("theta")
    for i in range(n):
        t = i * dt
        try:
            x = rk4_step(f, x, t, dt)
        except (KinematicSingularity, InflowDiverged) as exc:
            halt = f"t={t:.6g}: {exc}"
            break
        xa = x + x_ref
        if not np.all(np.isfinite(xa)) or abs(xa[theta_i]) >= 0.5 * math.pi:
            halt = f"t={t + dt:.6g}: state left the valid domain"
            break
        states.append(xa)
        controls.append(u_ref + script(t + dt))
    m = len(states)
    return Trajectory(np.arange(m) * dt, np.array(states), np.array(controls), tuple(labels), tag, dt, halt)


@dataclass
class StateDivergence:
    rms: float
    peak_difference: float
    peak_response: float
    relative_rms: float
    time_to_10pct: float | None


def compare(a, b):
    """Per-state divergence of ``b`` from reference trajectory ``a``.

    Parameters
    ----------
    a, b : Trajectory
        Must share the time grid and state labels.

    Returns
    -------
    dict of str to StateDivergence
        ``peak_response`` is the largest excursion of ``a`` from its
        initial value and ``time_to_10pct`` the first time the difference
        exceeds 10 % of it.

    Raises
    ------
    GridError
    """
    if len(a.times) != len(b.times) or not np.allclose(a.times, b.times, rtol=0, atol=1e-9):
        raise GridError("trajectories have different time grids")
    if tuple(a.state_labels) != tuple(b.state_labels):
        raise GridError("trajectories have different state labels")
    out = {}
    for j, lab in enumerate(a.state_labels):
        d = b.states[:, j] - a.states[:, j]
        rms = float(np.sqrt(np.mean(d * d))) if d.size else 0.0
        peak_diff = float(np.max(np.abs(d), initial=0.0))
        peak = float(np.max(np.abs(a.states[:, j] - a.states[0, j]), initial=0.0))
        rel = rms / peak if peak > 0 else (0.0 if rms == 0 else math.inf)
        hit = np.nonzero(np.abs(d) > 0.1 * peak)[0] if peak > 0 else np.nonzero(np.abs(d) > 0)[0]
        t10 = float(a.times[hit[0]]) if hit.size else None
        out[lab] = StateDivergence(rms, peak_diff, peak, rel, t10)
    return out
