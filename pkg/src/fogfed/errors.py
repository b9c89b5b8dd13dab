"""Exception types shared across the package."""


class FogfedError(Exception):
    """Base class for all package-specific errors."""


class InsufficientData(FogfedError):
    """Too few samples for the requested estimate."""


class InvalidSample(FogfedError):
    """A sample value is non-finite or out of domain."""


class DegenerateSample(FogfedError):
    """All sample values are identical where variation is required."""


class InvalidParameter(FogfedError):
    """A tuning parameter (resample count, significance level, ...) is out of range."""


class DivisionDomain(FogfedError):
    """A rate or time denominator is zero or negative."""


class UnfittableFamily(FogfedError):
    """The candidate distribution family cannot be fitted to the data."""


class UnknownPair(FogfedError, KeyError):
    """No latency-matrix entry for the queried (task type, fog) pair."""


class Unpartitionable(FogfedError):
    """The workflow is too small to bipartition."""


class DegenerateSpec(FogfedError):
    """A workload specification cannot produce valid tasks."""


class ParseError(FogfedError):
    """An input file is malformed; carries the offending line number when known."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class ConfigError(FogfedError):
    """The experiment configuration is inconsistent; carries the field path."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field
