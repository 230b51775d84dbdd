"""Select the compiled inflow kernels when available.

Set ``ROTORLIN_PURE_PYTHON=1`` to force the pure-Python implementation.
"""

import os

from . import _kernels_py

BACKEND = "python"

if os.environ.get("ROTORLIN_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _impl
        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _kernels_py
else:
    _impl = _kernels_py

solve_inflow = _impl.solve_inflow
inflow_grid = _impl.inflow_grid

__all__ = ["BACKEND", "solve_inflow", "inflow_grid"]
