"""Exception types shared across the package."""


class InvalidArgumentError(ValueError):
    pass


class DegenerateCaseError(ValueError):
    """Raised when lambda == mu, where the Moebius function is the identity."""


class SingularPencilError(ArithmeticError):
    """I + mu*T is singular or too badly conditioned to invert."""

    def __init__(self, message, rcond=None):
        super().__init__(message)
        self.rcond = rcond


class ConvergenceError(ArithmeticError):
    def __init__(self, message, last_iterate=None, last_value=None):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.last_value = last_value


class GenerationError(RuntimeError):
    pass


class RangeError(OverflowError):
    pass


class MatrixParseError(ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
