"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class HodgeNewtonError(Exception):
    exit_code = 1


class ValidationError(HodgeNewtonError, ValueError):
    exit_code = 2


class ParseError(ValidationError):
    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class UnsupportedDimensionError(ValidationError):
    pass


class InvalidPolytopeError(ValidationError):
    pass


class PreconditionError(ValidationError):
    pass


class FaceParametrizationError(ValidationError):
    pass


class GenerationError(ValidationError):
    pass


class BudgetExceededError(HodgeNewtonError):
    exit_code = 3

    def __init__(self, message: str, required: int, budget: int):
        super().__init__(message)
        self.required = required
        self.budget = budget


class InternalInconsistencyError(HodgeNewtonError, AssertionError):
    exit_code = 4
