"""Exception hierarchy.

Each class carries the process exit code the command-line front end maps it to.
"""


class BohmError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 1


class DomainError(BohmError, ValueError):
    """An argument lies outside the domain of the requested formula."""

    exit_code = 2


class PreconditionError(DomainError):
    """An operation-level precondition (e.g. barrier opacity) is not met."""


class SpanTooShortError(DomainError):
    """A trajectory does not cover a full period of the velocity field."""


class DegenerateStateError(BohmError, ArithmeticError):
    """The state is degenerate at the requested point (0/0 in the velocity)."""

    exit_code = 4


class NodeError(DegenerateStateError):
    """The wave function vanishes, so its phase is undefined."""

    def __init__(self, message, x=None):
        super().__init__(message)
        self.x = x


class StallError(DegenerateStateError):
    """The particle stopped moving during integration."""

    def __init__(self, message, x, t):
        super().__init__(message)
        self.x = x
        self.t = t


class StepFailureError(BohmError, ArithmeticError):
    """The adaptive integrator could not meet its tolerance at the minimum step."""

    exit_code = 4
