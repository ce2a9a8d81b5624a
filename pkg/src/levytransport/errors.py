"""Exception hierarchy.

Every error carries the process exit code the CLI maps it to.
"""


class LevyTransportError(Exception):
    exit_code = 1


class ValidationError(LevyTransportError, ValueError):
    """Invalid parameters, malformed samples or inconsistent inputs."""

    exit_code = 2


class UnsupportedComparisonError(ValidationError):
    """A closed form was requested for a pair it does not cover."""


class CouplingError(ValidationError):
    """Two jump diffusions cannot share one stream of event marks."""


class IncompleteInputError(ValidationError):
    def __init__(self, term):
        super().__init__(f"missing ingredient: {term!r}")
        self.term = term


class DivergenceError(LevyTransportError, ArithmeticError):
    """A distance integral or a simulated path is not finite."""

    exit_code = 3


class BlowUpError(DivergenceError):
    def __init__(self, time, value):
        super().__init__(f"path left |x| <= 1e12 at t={time:.6g} (x={value:.6g})")
        self.time = time
        self.value = value
