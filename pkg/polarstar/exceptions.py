class PolarStarException(Exception):
    """Base class for every error raised by polarstar"""

    exit_code = 1

    @property
    def error_name(self) -> str:
        return type(self).__name__

    @property
    def module(self) -> str:
        return type(self).__module__


class PolarStarValidationError(PolarStarException):
    """Raise when inputs or parameters are rejected"""

    exit_code = 1


class PolarStarInvariantViolation(PolarStarException):
    """Raise when a constructed object breaks a guaranteed property"""

    exit_code = 2


class NotPrimePower(PolarStarValidationError):
    pass


class DivisionByZero(PolarStarValidationError, ZeroDivisionError):
    pass


class InfeasibleDegree(PolarStarValidationError):
    """Raise for supernode degrees the family cannot realise"""

    pass


class InfeasibleOrder(PolarStarValidationError):
    pass


class NotInvolution(PolarStarValidationError):
    pass


class IncompleteAssignment(PolarStarValidationError):
    pass


class BijectionArityMismatch(PolarStarValidationError):
    pass


class EmptyDesignSpace(PolarStarValidationError):
    pass


class Disconnected(PolarStarValidationError):
    """Raise when a graph must be connected but is not"""

    def __init__(self, message: str, components: int):
        super().__init__(message)
        self.components = components


class PatternInfeasible(PolarStarValidationError):
    pass


class InvalidParameters(PolarStarValidationError):
    pass


class NoRoute(PolarStarValidationError):
    pass


class ConfigurationError(PolarStarValidationError):
    """Raise for bad defaults, campaign files or JSON envelopes"""

    pass


class DiameterViolation(PolarStarInvariantViolation):
    pass


class DecompositionNotFound(PolarStarInvariantViolation):
    pass


class PropertyCheckFailed(PolarStarInvariantViolation):
    pass


class VCDeadlockDetected(PolarStarInvariantViolation):
    pass
