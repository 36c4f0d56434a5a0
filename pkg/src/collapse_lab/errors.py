"""Exception hierarchy.

Anything a caller could have avoided by passing different arguments derives
from :class:`ValueError`; the CLI maps those to exit code 1 and everything
else to exit code 2.
"""


class CollapseLabError(Exception):
    """Base class for all errors raised by this package."""


class DegeneratePhase(CollapseLabError, ValueError):
    """cos(theta) vanishes, so the branch sign is undefined."""


class InvalidInitialWeight(CollapseLabError, ValueError):
    pass


class DegenerateSeed(CollapseLabError, ValueError):
    """Logistic-map seed outside (0, 1) or on an absorbing/fixed point."""


class SingularDenominator(CollapseLabError, ZeroDivisionError):
    pass


class EndpointAngle(CollapseLabError, ValueError):
    pass


class NonHermitian(CollapseLabError, ValueError):
    pass


class EmptySources(CollapseLabError, ValueError):
    pass


class ZeroVariance(CollapseLabError, ValueError):
    pass


class NonFiniteState(CollapseLabError, ArithmeticError):
    pass


class ResampleExhausted(CollapseLabError, RuntimeError):
    pass


class IoFailure(CollapseLabError, OSError):
    pass


class ConfigError(CollapseLabError, ValueError):
    """A single problem with a run configuration."""

    def __init__(self, key, message):
        super().__init__(f"{key}: {message}")
        self.key = key
        self.message = message


class MissingKey(ConfigError):
    pass


class UnknownKey(ConfigError):
    pass


class TypeMismatch(ConfigError):
    pass


class InvalidValue(ConfigError):
    pass


class ConfigErrors(CollapseLabError, ValueError):
    """Every problem found while validating a configuration file.

    Attributes:
        errors: list of :class:`ConfigError` instances, in file order where
            that is meaningful.
    """

    def __init__(self, errors):
        self.errors = list(errors)
        lines = "\n".join(f"  {type(e).__name__}: {e}" for e in self.errors)
        super().__init__(f"{len(self.errors)} configuration error(s):\n{lines}")
