"""Exception hierarchy with stable machine-readable error kinds.

Every error raised by this package derives from FieldMarketError and
carries a ``kind`` string; the CLI renders it as ``error[<kind>]: message``.
"""


class FieldMarketError(Exception):
    """Base class for all package errors."""

    kind = "error"


class DimensionMismatchError(FieldMarketError):
    """Vectors or specs of unequal dimension were combined."""

    kind = "dimension"


class NonFiniteError(FieldMarketError):
    """An input value is NaN or infinite."""

    kind = "non-finite"


class DomainError(FieldMarketError):
    """A value violates a documented domain constraint (sign, range, scale)."""

    kind = "domain"


class EmptyInputError(FieldMarketError):
    """An operation requires at least one element."""

    kind = "empty"


class DegeneratePathError(FieldMarketError):
    """An integration path passes within the distance floor of a source."""

    kind = "degenerate-path"


class FormatError(FieldMarketError):
    """Malformed input file; the message carries row/column context."""

    kind = "format"


class OhlcRangeError(FieldMarketError):
    """A bar's low/high envelope does not contain its open/close."""

    kind = "ohlc"


class TimestampOrderError(FieldMarketError):
    """Series timestamps are not strictly increasing."""

    kind = "timestamp-order"


class ConfigError(FieldMarketError):
    """Unknown configuration key or unparseable configuration value."""

    kind = "config"


class UsageError(FieldMarketError):
    """Bad command-line invocation."""

    kind = "usage"
