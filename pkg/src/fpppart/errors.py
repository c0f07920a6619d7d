"""Exception types shared across the package."""


class FppError(Exception):
    """Base class for all errors raised by fpppart."""


class ConfigError(FppError, ValueError):
    """Invalid configuration: bad q, too few partitions, unknown method."""


class DomainError(FppError, ValueError):
    """An argument lies outside the domain of an operation (e.g. inverting zero)."""


class DataError(FppError, ValueError):
    """Malformed or inconsistent input data."""
