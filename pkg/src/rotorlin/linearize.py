"""Small-perturbation state-space models about a trim point.

Force and moment partials come from central differences of the nonlinear
loads; inertial cross-coupling, gravity and Euler kinematics enter
analytically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .airframe import compute_loads
from .dynamics import (FLAP_LABELS, INPUT_LABELS, STATE_LABELS, ControlInput, FlightState,
                       derivative_vector)
from .errors import NumericalError
from .fd import step_policy
from .rotor import FlappingState, InflowDiverged

AUG_LABELS = STATE_LABELS + FLAP_LABELS
ALL_VARIABLES = AUG_LABELS + INPUT_LABELS
LONG_STATES = ("u", "w", "q", "theta")
LAT_STATES = ("v", "p", "r", "phi")
LONG_INPUTS = ("d_coll", "d_long")
LAT_INPUTS = ("d_ped", "d_lat")

STATE_UNITS = {"u": "m/s", "v": "m/s", "w": "m/s", "p": "rad/s", "q": "rad/s", "r": "rad/s",
               "phi": "rad", "theta": "rad", "psi": "rad", "a1s": "rad", "b1s": "rad"}
INPUT_UNITS = {k: "rad" for k in INPUT_LABELS}

HALVING_REL_TOL = 1e-3
HALVING_ABS_TOL = 1e-6


class PartialUnavailable(NumericalError):
    """A partial could not be formed because the perturbed model failed."""

    def __init__(self, variable):
        super().__init__(f"partial with respect to {variable} unavailable")
        self.variable = variable


def _reference_vector(trim):
    st = trim.state
    a1s = 0.0 if st.a1s is None else st.a1s
    b1s = 0.0 if st.b1s is None else st.b1s
    return np.concatenate([st.as_array()[:9], [a1s, b1s], trim.controls.as_array()])


def _loads_vector(z, params, flapping_states):
    st = FlightState(*(float(c) for c in z[:9]))
    ctrl = ControlInput(*(float(c) for c in z[11:]))
    flap = FlappingState(float(z[9]), float(z[10])) if flapping_states else None
    return compute_loads(st, ctrl, params, flap).total.as_array()


def _difference(fun, z0, j, h):
    zp = z0.copy()
    zm = z0.copy()
    zp[j] += h
    zm[j] -= h
    return (fun(zp) - fun(zm)) / (2.0 * h)


def _partial_with_retry(fun, z0, j, h, name):
    try:
        return _difference(fun, z0, j, h), h
    except InflowDiverged:
        pass
    try:
        return _difference(fun, z0, j, h / 4.0), h / 4.0
    except InflowDiverged:
        raise PartialUnavailable(name) from None


def force_moment_partials(trim, variable, params, flapping_states=False, step=None):
    """Partial of the six body loads with respect to one variable.

    Parameters
    ----------
    trim : TrimPoint
    variable : str
        A state name (``u`` ... ``psi``, ``a1s``, ``b1s``) or input name
        (``d_coll``, ``d_ped``, ``d_lat``, ``d_long``).
    params : VehicleParams
    flapping_states : bool
        Hold flapping at its trim value instead of letting it follow the
        quasi-steady solution. Always true for ``a1s`` and ``b1s``.
    step : float, optional
        Differencing step; defaults to :func:`step_policy`.

    Returns
    -------
    numpy.ndarray
        ``d(X, Y, Z, L, M, N)/d(variable)``.

    Raises
    ------
    PartialUnavailable
        The model failed at the perturbed points even after reducing the step.
    """
    if variable not in ALL_VARIABLES:
        raise KeyError(f"unknown variable {variable!r}")
    j = ALL_VARIABLES.index(variable)
    z0 = _reference_vector(trim)
    h = step_policy(z0[j]) if step is None else step
    flap = flapping_states or variable in FLAP_LABELS
    col, _ = _partial_with_retry(lambda z: _loads_vector(z, params, flap), z0, j, h, variable)
    return col


@dataclass
class StepReport:
    """Finite-difference audit of the numerically formed entries.

    ``a_steps`` and ``b_steps`` hold the step per column. ``*_halved`` are
    the matrices recomputed with half the step, ``*_richardson`` the
    extrapolated estimates, and ``flagged`` lists ``(matrix, row, col)``
    entries whose halving change breaks the relative/absolute tolerance.
    """

    a_steps: np.ndarray
    b_steps: np.ndarray
    a_halved: np.ndarray
    b_halved: np.ndarray
    a_richardson: np.ndarray
    b_richardson: np.ndarray
    max_relative_change: float
    flagged: list = field(default_factory=list)


@dataclass
class LinearModel:
    """State-space model ``dx/dt = A x + B u`` about a trim point.

    For the quasi-steady variant ``flap_columns`` (9x2), ``flap_rows``
    (2x9), ``flap_block`` (2x2) and ``flap_inputs`` (2x4) hold the pieces
    needed to append explicit flapping states to the 9-state model.
    """

    a_matrix: np.ndarray
    b_matrix: np.ndarray
    state_labels: tuple
    input_labels: tuple
    trim: object
    step_report: StepReport
    variant: str
    flap_columns: np.ndarray
    flap_rows: np.ndarray
    flap_block: np.ndarray
    flap_inputs: np.ndarray

    @property
    def state_units(self):
        return tuple(STATE_UNITS[s] for s in self.state_labels)

    @property
    def input_units(self):
        return tuple(INPUT_UNITS[s] for s in self.input_labels)

    def index(self, label):
        return self.state_labels.index(label)


def kinematic_partials(trim):
    """Analytic rows of the Euler-angle rates, 3x9 over the body states."""
    st = trim.state
    p, q, r, phi, th = st.p, st.q, st.r, st.phi, st.theta
    sp, cp = math.sin(phi), math.cos(phi)
    tt, sec = math.tan(th), 1.0 / math.cos(th)
    rot = q * sp + r * cp
    rot_phi = q * cp - r * sp
    K = np.zeros((3, 9))
    # phi_dot = p + rot tan(theta)
    K[0, 3] = 1.0
    K[0, 4] = sp * tt
    K[0, 5] = cp * tt
    K[0, 6] = rot_phi * tt
    K[0, 7] = rot * sec * sec
    # theta_dot = q cos(phi) - r sin(phi)
    K[1, 4] = cp
    K[1, 5] = -sp
    K[1, 6] = -q * sp - r * cp
    # psi_dot = rot sec(theta)
    K[2, 4] = sp * sec
    K[2, 5] = cp * sec
    K[2, 6] = rot_phi * sec
    K[2, 7] = rot * sec * tt
    return K


def inertial_partials(trim, params):
    """Analytic body-row partials from rotating-frame, gyroscopic and gravity terms (6x9)."""
    st = trim.state
    u, v, w, p, q, r = st.u, st.v, st.w, st.p, st.q, st.r
    phi, th = st.phi, st.theta
    g = params.g
    Ixx, Iyy, Izz = params.Ixx, params.Iyy, params.Izz
    C = np.zeros((6, 9))
    # u_dot = X/m - q w + r v
    C[0, 1], C[0, 2], C[0, 4], C[0, 5] = r, -q, -w, v
    # v_dot = Y/m - r u + p w
    C[1, 0], C[1, 2], C[1, 3], C[1, 5] = -r, p, w, -u
    # w_dot = Z/m - p v + q u
    C[2, 0], C[2, 1], C[2, 3], C[2, 4] = q, -p, -v, u
    kx, ky, kz = (Iyy - Izz) / Ixx, (Izz - Ixx) / Iyy, (Ixx - Iyy) / Izz
    C[3, 4], C[3, 5] = kx * r, kx * q
    C[4, 3], C[4, 5] = ky * r, ky * p
    C[5, 3], C[5, 4] = kz * q, kz * p
    sp, cp, sth, cth = math.sin(phi), math.cos(phi), math.sin(th), math.cos(th)
    C[0, 7] = -g * cth
    C[1, 6], C[1, 7] = g * cp * cth, -g * sp * sth
    C[2, 6], C[2, 7] = -g * sp * cth, -g * cp * sth
    return C


_ATTITUDE = ("phi", "theta", "psi")


def _numeric_block(trim, params, flapping_states, columns, scale):
    """Scaled load partials for ``columns`` at step h and h/2."""
    z0 = _reference_vector(trim)
    fun = lambda z: _loads_vector(z, params, flapping_states)
    n = len(columns)
    full = np.zeros((6, n))
    half = np.zeros((6, n))
    steps = np.zeros(n)
    for k, name in enumerate(columns):
        if name in _ATTITUDE:
            continue
        j = ALL_VARIABLES.index(name)
        h = step_policy(z0[j])
        col, h = _partial_with_retry(fun, z0, j, h, name)
        colh, _ = _partial_with_retry(fun, z0, j, h / 2.0, name)
        full[:, k] = col / scale
        half[:, k] = colh / scale
        steps[k] = h
    return full, half, steps


def _flap_dynamics(trim, params, columns):
    """Partials of the flapping rates (augmented model) over ``columns``, 2xn."""
    z0 = _reference_vector(trim)

    def fun(z):
        return derivative_vector(z[:11], z[11:], params)[9:]

    out = np.zeros((2, len(columns)))
    for k, name in enumerate(columns):
        j = ALL_VARIABLES.index(name)
        out[:, k], _ = _partial_with_retry(fun, z0, j, step_policy(z0[j]), name)
    return out


def _flag(a, ah):
    diff = np.abs(a - ah)
    rel = diff / np.maximum(np.abs(a), 1e-300)
    bad = (rel > HALVING_REL_TOL) & (diff > HALVING_ABS_TOL)
    rel_meaningful = np.where(np.abs(a) > HALVING_ABS_TOL, rel, 0.0)
    return bad, float(rel_meaningful.max(initial=0.0))


def assemble_linear_model(trim, params, variant="quasi_steady"):
    """Build A and B about a trim point.

    Parameters
    ----------
    trim : TrimPoint
    params : VehicleParams
    variant : {"quasi_steady", "augmented"}
        ``quasi_steady`` gives a 9-state model with flapping replaced by its
        steady solution; ``augmented`` gives 11 states with ``a1s`` and
        ``b1s`` as explicit first-order states.

    Returns
    -------
    LinearModel

    Raises
    ------
    PartialUnavailable
    """
    if variant not in ("quasi_steady", "augmented"):
        raise ValueError(f"unknown variant {variant!r}")
    aug = variant == "augmented"
    labels = AUG_LABELS if aug else STATE_LABELS
    n = len(labels)
    scale = np.array([params.m] * 3 + [params.Ixx, params.Iyy, params.Izz])

    body, body_h, a_steps = _numeric_block(trim, params, aug, labels, scale)
    inp, inp_h, b_steps = _numeric_block(trim, params, aug, INPUT_LABELS, scale)
    analytic = np.zeros((6, n))
    analytic[:, :9] = inertial_partials(trim, params)

    A = np.zeros((n, n))
    B = np.zeros((n, 4))
    Ah = np.zeros((n, n))
    Bh = np.zeros((n, 4))
    A[:6] = body + analytic
    Ah[:6] = body_h + analytic
    B[:6] = inp
    Bh[:6] = inp_h
    K = kinematic_partials(trim)
    A[6:9, :9] = K
    Ah[6:9, :9] = K

    # explicit flapping pieces, always evaluated on the augmented model
    flap_cols, flap_cols_h, _ = _numeric_block(trim, params, True, FLAP_LABELS, scale)
    fr = _flap_dynamics(trim, params, AUG_LABELS + INPUT_LABELS)
    flap_rows, flap_block, flap_inputs = fr[:, :9], fr[:, 9:11], fr[:, 11:]
    if aug:
        A[9:, :] = fr[:, :11]
        Ah[9:, :] = fr[:, :11]
        B[9:, :] = flap_inputs
        Bh[9:, :] = flap_inputs
    flap_columns = np.zeros((9, 2))
    flap_columns[:6] = flap_cols

    bad_a, rel_a = _flag(A, Ah)
    bad_b, rel_b = _flag(B, Bh)
    flagged = [("A", int(i), int(j)) for i, j in zip(*np.nonzero(bad_a))]
    flagged += [("B", int(i), int(j)) for i, j in zip(*np.nonzero(bad_b))]
    report = StepReport(a_steps, b_steps, Ah, Bh, (4.0 * Ah - A) / 3.0, (4.0 * Bh - B) / 3.0,
                        max(rel_a, rel_b), flagged)
    return LinearModel(A, B, labels, INPUT_LABELS, trim, report, variant,
                       flap_columns, flap_rows, flap_block, flap_inputs)


@dataclass
class SubModel:
    """One decoupled block."""

    a_matrix: np.ndarray
    b_matrix: np.ndarray
    state_labels: tuple
    input_labels: tuple


@dataclass
class DecoupledModel:
    """Longitudinal/vertical and lateral/directional blocks.

    ``coupling_norm`` is the largest magnitude among the discarded
    cross-block entries of A and B.
    """

    long_ver: SubModel
    lat_dir: SubModel
    coupling_norm: float
    include_flapping: bool


def coupled_model(model):
    """10-state matrix over body states (minus psi) plus flapping, and 10x4 B."""
    body = [s for s in STATE_LABELS if s != "psi"]
    idx = [STATE_LABELS.index(s) for s in body]
    labels = tuple(body) + FLAP_LABELS
    A = np.zeros((10, 10))
    B = np.zeros((10, 4))
    if model.variant == "augmented":
        full = [AUG_LABELS.index(s) for s in labels]
        A[:] = model.a_matrix[np.ix_(full, full)]
        B[:] = model.b_matrix[full]
    else:
        A[:8, :8] = model.a_matrix[np.ix_(idx, idx)]
        A[:8, 8:] = model.flap_columns[idx]
        A[8:, :8] = model.flap_rows[:, idx]
        A[8:, 8:] = model.flap_block
        B[:8] = model.b_matrix[idx]
        B[8:] = model.flap_inputs
    return A, B, labels


def condensed_model(model):
    """Body-state model with flapping eliminated (8 states, psi dropped)."""
    body = tuple(s for s in STATE_LABELS if s != "psi")
    if model.variant == "quasi_steady":
        idx = [STATE_LABELS.index(s) for s in body]
        return model.a_matrix[np.ix_(idx, idx)], model.b_matrix[idx], body
    A, B, _ = coupled_model(model)
    a22 = A[8:, 8:]
    A_red = A[:8, :8] - A[:8, 8:] @ np.linalg.solve(a22, A[8:, :8])
    B_red = B[:8] - A[:8, 8:] @ np.linalg.solve(a22, B[8:])
    return A_red, B_red, body


def decouple(model, include_flapping=True):
    """Split a model into longitudinal and lateral-directional blocks.

    With flapping included each block gains its flapping state as a fifth
    state. For a quasi-steady model the body rows keep their quasi-steady
    entries (flapping lag already folded in), the flapping columns hold the
    direct load sensitivity to tip-path tilt and the flapping rows hold the
    first-order flapping dynamics. Without flapping, an augmented model is
    statically condensed.

    Parameters
    ----------
    model : LinearModel
    include_flapping : bool

    Returns
    -------
    DecoupledModel
    """
    if include_flapping:
        A, B, labels = coupled_model(model)
        long_s = LONG_STATES + ("a1s",)
        lat_s = LAT_STATES + ("b1s",)
    else:
        A, B, labels = condensed_model(model)
        long_s, lat_s = LONG_STATES, LAT_STATES
    li = [labels.index(s) for s in long_s]
    ti = [labels.index(s) for s in lat_s]
    lu = [INPUT_LABELS.index(s) for s in LONG_INPUTS]
    tu = [INPUT_LABELS.index(s) for s in LAT_INPUTS]
    long_ver = SubModel(A[np.ix_(li, li)].copy(), B[np.ix_(li, lu)].copy(), long_s, LONG_INPUTS)
    lat_dir = SubModel(A[np.ix_(ti, ti)].copy(), B[np.ix_(ti, tu)].copy(), lat_s, LAT_INPUTS)
    off = [A[np.ix_(li, ti)], A[np.ix_(ti, li)], B[np.ix_(li, tu)], B[np.ix_(ti, lu)]]
    coupling = max(float(np.abs(x).max(initial=0.0)) for x in off)
    return DecoupledModel(long_ver, lat_dir, coupling, include_flapping)
