"""Exception types shared across the package."""


class EggdError(Exception):
    """Base class for errors raised by this package."""


class DisconnectedGraphError(EggdError):
    """Raised when an operation requires a connected graph but got components.

    Callers should run :func:`eggd.graph.ensure_connected` first.
    """


class ConvergenceError(EggdError):
    """Raised when an iterative solve exhausts its iteration budget."""
