"""Exception types shared across the package."""


class TwoModeError(Exception):
    """Base class for every error raised by this package."""


class TruncationTooLarge(TwoModeError):
    """A requested tensor space exceeds the configured dimension budget."""


class TruncationTooSmall(TwoModeError):
    """A Fock-space cutoff would discard more population than allowed."""


class ExceedsTruncation(TwoModeError):
    """An occupation number lies outside the truncated ladder."""


class BadFactor(TwoModeError):
    """A tensor-factor index does not exist in the given space."""


class NotHermitian(TwoModeError):
    """An operation requiring a Hermitian matrix received a non-Hermitian one."""


class DimensionMismatch(TwoModeError):
    """Operands live on incompatible spaces."""


class NotAState(TwoModeError):
    """A vector or matrix fails the normalization or positivity checks for states."""


class OutOfValidity(TwoModeError):
    """Parameters fall outside the validity region of an approximation."""


class NoSwitch(TwoModeError):
    """A critical-parameter scan found the same verdict at both endpoints."""


class InsufficientHorizon(TwoModeError):
    """The sampled horizon is too short for the detected oscillation period."""


class ConfigError(TwoModeError):
    """A scenario configuration failed to parse or validate."""
