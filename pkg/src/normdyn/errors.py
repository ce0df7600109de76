"""Exception types shared across the package."""


class NormdynError(Exception):
    """Base class for all package-specific errors."""


class ConstraintViolation(NormdynError):
    """A structural precondition on the inputs does not hold."""


class NonPositivePayoff(NormdynError):
    """Payoff parameters a, b must be strictly positive."""


class InvalidTopology(NormdynError):
    """Network generator parameters are out of range."""


class NonFiniteState(NormdynError):
    """Integration produced a non-finite state (step size too large)."""


class ConfigError(NormdynError):
    """A configuration value or key is invalid."""
