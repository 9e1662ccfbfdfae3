"""Exceptions and warnings raised by nggp-mix."""


class NggpMixError(Exception):
    """Base class for nggp-mix errors."""

    pass


class ConfigurationError(NggpMixError, ValueError):
    """Exception raised for invalid model, sampler or base-measure settings."""

    pass


class DataFormatError(NggpMixError, ValueError):
    """Exception raised for unreadable observation files."""

    pass


class OracleError(NggpMixError, ValueError):
    """Exception raised when an oracle is asked for more than it can enumerate."""

    pass


class TruncationWarning(UserWarning):
    """Warning emitted when the atom cap forces a higher truncation level."""

    pass
