"""Custom exception hierarchy for parrondo-channels."""


class ParrondoChannelsError(Exception):
    """Base exception for parrondo-channels."""


class ParameterError(ParrondoChannelsError, ValueError):
    """Raised when an argument lies outside its admissible range."""


class ConfigurationError(ParrondoChannelsError):
    """Raised for invalid channel specs, simulation or experiment configurations."""


class NotAntiDegradableError(ParrondoChannelsError):
    """Raised when no degrading map exists because Bob's delivery weight exceeds 1/2."""


class ConvergenceError(ParrondoChannelsError):
    """Raised when an iterative solver fails to certify its tolerance within the iteration cap."""


class InsufficientSamplesError(ParrondoChannelsError):
    """Raised when an empirical estimate has no (or too few) samples behind it."""


class SimulationError(ParrondoChannelsError):
    """Raised when a simulation would leave the checked memory range."""


class ClaimFailureError(ParrondoChannelsError):
    """Raised when a reproduced claim misses its analytic value."""
