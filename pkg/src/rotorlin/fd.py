"""Central finite differences shared by the trim solver and the linearizer."""

import numpy as np


def step_policy(x0):
    """Differencing step for a variable whose reference value is ``x0``.

    Returns ``max(1e-4 |x0|, 1e-5)`` in the variable's own unit.
    """
    return max(1e-4 * abs(float(x0)), 1e-5)


def central_difference(f, x0, j, h):
    """``(f(x0 + h e_j) - f(x0 - h e_j)) / 2h`` for vector-valued ``f``."""
    x0 = np.asarray(x0, dtype=float)
    xp = x0.copy()
    xm = x0.copy()
    xp[j] += h
    xm[j] -= h
    return (np.asarray(f(xp)) - np.asarray(f(xm))) / (2.0 * h)


def jacobian(f, x0, steps):
    """Column-by-column central-difference Jacobian."""
    cols = [central_difference(f, x0, j, h) for j, h in enumerate(steps)]
    return np.column_stack(cols)
