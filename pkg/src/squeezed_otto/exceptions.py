"""Exception hierarchy shared by the library and the CLI."""


class OttoError(Exception):
    """Base class for every error raised by this package."""


class DomainError(OttoError, ValueError):
    """An argument lies outside the domain of the model."""


class InfeasibleError(OttoError):
    """The requested operating mode has an empty window for this configuration."""


class ConvergenceError(OttoError, RuntimeError):
    """The scalar maximizer did not reach its tolerance within the iteration cap."""
