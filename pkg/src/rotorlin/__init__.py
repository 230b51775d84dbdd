"""Flight-dynamics toolkit for a small single-rotor helicopter.

Nonlinear six-degree-of-freedom model with momentum-theory rotors,
trim solver, numerical linearizer and modal analysis.
"""

from .config import VehicleParams, complete_parameters, default_params, dump_config, load_config
from .dynamics import ControlInput, FlightState, state_derivative
from .kernels import BACKEND
from .trim import TrimPoint, trim_forward, trim_hover

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "ControlInput", "FlightState", "TrimPoint", "VehicleParams",
    "complete_parameters", "default_params", "dump_config", "load_config",
    "state_derivative", "trim_forward", "trim_hover", "__version__",
]
