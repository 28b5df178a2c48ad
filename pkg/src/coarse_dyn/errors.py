class CoarseDynError(Exception):
    """Base class for errors raised by coarse_dyn."""


class DomainError(CoarseDynError, ValueError):
    """A point or parameter lies outside the domain of an operation."""


class PrecisionError(CoarseDynError, ValueError):
    """An exact computation was fed an inexact value, or precision is too low."""


class WindowError(CoarseDynError, ValueError):
    """A sampling window is empty or its step does not tile it."""
