"""Exception types raised across the package."""


class HermitekError(Exception):
    pass


class DomainError(HermitekError, ValueError):
    """Argument lies outside [0, 1] or another stated domain."""


class ModeError(HermitekError, TypeError):
    """Operands were built in different arithmetic modes."""


class NumericError(HermitekError, ArithmeticError):
    """Non-finite values showed up where finite ones are required."""


class ConfigurationError(HermitekError, ValueError):
    """Invalid knot configuration or interpolation data."""


class IllConditionedError(HermitekError, ArithmeticError):
    """The collocation system is singular at the working precision."""

    def __init__(self, message, condition=float("inf"), precision=None):
        super().__init__(message)
        self.condition = condition
        self.precision = precision
