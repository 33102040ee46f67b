"""Exception types raised by widths_lab."""


class WidthsLabError(Exception):
    """Base class for all package errors."""


class ParameterError(WidthsLabError, ValueError):
    """A numeric argument lies outside the domain of an operation."""


class SpecSyntaxError(WidthsLabError, ValueError):
    """A domain, sequence or threshold specifier could not be parsed."""

    def __init__(self, message, token=None):
        super().__init__(message)
        self.token = token


class UnsupportedError(WidthsLabError):
    """The requested operation is not defined for this family/parameters."""


class NotQuasiPolyError(UnsupportedError):
    """Quasi-polynomial tractability fails, so no exponent exists."""
