"""Exception hierarchy shared by every module.

Each class carries the process exit status the command-line front end maps
it to: 2 for bad input, 3 for convergence failures, 4 for numerical failures.
"""


class RotorlinError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class InputError(RotorlinError):
    """Malformed or inconsistent user input."""

    exit_code = 2


class ConvergenceError(RotorlinError):
    """An iterative solver failed to converge."""

    exit_code = 3


class NumericalError(RotorlinError):
    """A numerical routine failed or hit a singular configuration."""

    exit_code = 4
