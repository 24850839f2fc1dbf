"""Exception hierarchy.

Every error raised on purpose by the package derives from :class:`TraNetError`.
The ``exit_code`` attribute is what the command line returns for it.
"""


class TraNetError(Exception):
    exit_code = 2


class ConfigError(TraNetError, ValueError):
    exit_code = 1


class ParseError(TraNetError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class GraphError(TraNetError, ValueError):
    pass


class ConvergenceError(TraNetError, ArithmeticError):
    exit_code = 3

    def __init__(self, message, residual):
        super().__init__(f"{message} (last residual {residual:.3e})")
        self.residual = residual


class FitError(TraNetError, ValueError):
    exit_code = 3


class DegenerateFitError(FitError):
    """All tail samples sit at x_min, so the MLE exponent is infinite."""


class SchemaMismatchError(TraNetError, ValueError):
    pass


class TrainingError(TraNetError, ValueError):
    pass


class ModelFormatError(TraNetError, ValueError):
    pass


class UndefinedMetricError(TraNetError, ValueError):
    pass


class SplitError(TraNetError, ValueError):
    pass


class DomainError(TraNetError, ValueError):
    pass
