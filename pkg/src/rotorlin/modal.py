"""Eigen analysis, eigenvector normalization and mode identification."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, NumericalError

MARGINAL_LIMIT = 0.15
DOMINANCE_FRACTION = 0.5

_VELOCITY = ("u", "v", "w")
_RATE = ("p", "q", "r")
_ANGLE = ("phi", "theta", "psi", "a1s", "b1s")


class EigenFailed(NumericalError):
    """The eigensolver did not converge."""


class LabelError(InputError):
    """A state label has no normalization rule."""

    def __init__(self, label):
        super().__init__(f"no normalization rule for state {label!r}")
        self.label = label


@dataclass
class Mode:
    eigenvalue: complex
    damping_ratio: float
    frequency: float
    eigenvector: np.ndarray
    normalized_eigenvector: np.ndarray | None = None
    dominant_states: list = field(default_factory=list)


@dataclass
class ModalReport:
    modes: list
    stability_verdict: str
    state_labels: tuple | None = None


def damping_and_frequency(lam):
    """``(zeta, omega)`` with ``zeta = -Re/|lam|`` and ``omega = |lam|``."""
    omega = abs(lam)
    if omega == 0.0:
        return 0.0, 0.0
    return -lam.real / omega, omega


def stability_verdict(eigenvalues, marginal_limit=MARGINAL_LIMIT):
    """``stable``, ``marginally-unstable`` (all positive real parts within the limit) or ``unstable``."""
    re = np.real(np.asarray(eigenvalues))
    if np.any(re > marginal_limit):
        return "unstable"
    if np.any(re > 0.0):
        return "marginally-unstable"
    return "stable"


def normalize_eigenvector(v, state_labels, params):
    """Scale an eigenvector to comparable dimensionless components.

    Velocities are divided by the main-rotor tip speed and rates by the
    rotor speed; angles are left as they are. The vector is first scaled
    to unit length and finally rotated so its largest component is real
    and positive, which makes the result independent of the eigensolver's
    arbitrary complex scaling.

    Parameters
    ----------
    v : array_like of complex
    state_labels : sequence of str
    params : VehicleParams

    Returns
    -------
    numpy.ndarray of complex

    Raises
    ------
    LabelError
        A label is not a known state name.
    """
    v = np.asarray(v, dtype=complex)
    if len(v) != len(state_labels):
        raise ValueError("eigenvector and label lengths differ")
    scale = np.empty(len(v))
    for i, lab in enumerate(state_labels):
        if lab in _VELOCITY:
            scale[i] = 1.0 / params.mr_tip_speed
        elif lab in _RATE:
            scale[i] = 1.0 / params.mr_omega_nom
        elif lab in _ANGLE:
            scale[i] = 1.0
        else:
            raise LabelError(lab)
    norm = np.linalg.norm(v)
    if norm == 0.0:
        return v * scale
    out = v / norm * scale
    k = int(np.argmax(np.abs(out)))
    out = out * (abs(out[k]) / out[k])
    out[k] = abs(out[k])  # drop the round-off imaginary part
    return out


def eigen_analysis(matrix, state_labels=None, params=None):
    """Eigenvalues, damping, frequency and eigenvectors of a real square matrix.

    Parameters
    ----------
    matrix : array_like
        Square, real, finite.
    state_labels : sequence of str, optional
        Enables normalized eigenvectors and dominance ranking (together
        with ``params``).
    params : VehicleParams, optional

    Returns
    -------
    ModalReport
        Modes ordered by increasing ``|lambda|``, positive imaginary part
        first within a conjugate pair.

    Raises
    ------
    EigenFailed
        LAPACK did not converge or the input is not finite.
    """
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    if not np.all(np.isfinite(a)):
        raise EigenFailed("matrix has non-finite entries")
    try:
        lam, vec = np.linalg.eig(a)
    except np.linalg.LinAlgError as exc:
        raise EigenFailed(str(exc)) from exc
    order = sorted(range(len(lam)), key=lambda i: (round(abs(lam[i]), 12), -lam[i].imag))
    modes = []
    for i in order:
        ev = complex(lam[i])
        zeta, omega = damping_and_frequency(ev)
        mode = Mode(ev, zeta, omega, vec[:, i].astype(complex))
        if state_labels is not None and params is not None:
            mode.normalized_eigenvector = normalize_eigenvector(mode.eigenvector, state_labels, params)
            mode.dominant_states = _ranking(mode.normalized_eigenvector, state_labels)
        modes.append(mode)
    labels = tuple(state_labels) if state_labels is not None else None
    return ModalReport(modes, stability_verdict(lam), labels)


def _ranking(nv, labels):
    mags = np.abs(nv)
    idx = sorted(range(len(nv)), key=lambda i: -mags[i])
    return [(labels[i], float(mags[i])) for i in idx]


@dataclass
class ModeDominance:
    eigenvalue: complex
    ranking: list
    dominant: tuple
    top_two: tuple
    label: str | None


def _classify(top2, lam):
    t = set(top2)
    oscillatory = abs(lam.imag) > 0.0
    if t <= {"q", "theta", "a1s"} and ("a1s" in t or "q" in t):
        return "short period"
    if t == {"u", "theta"}:
        return "phugoid"
    if top2[0] == "w":
        return "heaving"
    if oscillatory and t <= {"v", "p", "r", "phi"} and t & {"v", "r"}:
        return "dutch roll"
    if "r" in t and t & {"v", "p", "phi"}:
        return "spiral"
    if t <= {"p", "phi", "b1s"} and t & {"p", "b1s"}:
        return "roll"
    if top2[0] == "r":
        return "yaw"
    if not oscillatory and top2[0] in ("q", "theta"):
        return "pitch subsidence"
    return None


def mode_dominance(report):
    """Rank each mode's states by normalized magnitude and name the mode.

    A state is dominant when its magnitude is at least half of the
    largest. The label comes from the two largest components: pitch
    rate/attitude with flapping is the short period, forward speed with
    pitch attitude the phugoid, vertical speed first the heave mode, a
    lateral oscillation in sideslip and yaw or roll a dutch roll, real yaw
    rate with sideslip or roll a spiral, roll rate/attitude with lateral
    flapping a roll mode, yaw rate alone a yaw mode and a real mode led by
    pitch a pitch subsidence. Anything else stays unlabeled.
    """
    out = []
    for mode in report.modes:
        if not mode.dominant_states:
            raise ValueError("report has no normalized eigenvectors")
        ranking = mode.dominant_states
        peak = ranking[0][1]
        dominant = tuple(s for s, m in ranking if peak > 0 and m >= DOMINANCE_FRACTION * peak)
        top2 = tuple(s for s, _ in ranking[:2])
        out.append(ModeDominance(mode.eigenvalue, ranking, dominant, top2, _classify(top2, mode.eigenvalue)))
    return out
