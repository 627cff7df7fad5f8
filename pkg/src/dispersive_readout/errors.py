"""Exception types shared across the package."""


class InvalidParameterError(ValueError):
    """A parameter value violates a model invariant."""


class DomainError(ValueError):
    """An input lies outside the mathematical domain of an operation."""


class SingularJacobianError(RuntimeError):
    """The fit Jacobian is rank deficient (a parameter has no influence
    on the model, or two parameters are exactly degenerate)."""


class ConfigError(ValueError):
    """A run configuration file failed validation.

    Carries an optional line number of the offending key in the source file.
    """

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
