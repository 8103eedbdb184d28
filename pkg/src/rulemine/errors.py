"""Exception types shared across the package."""


class RulemineError(Exception):
    """Base class for all errors raised by this package."""


class SchemaError(RulemineError):
    """Schema document is malformed or data does not fit the schema layout."""


class DataError(RulemineError):
    """Data values are invalid or a dataset is unusable for an operation."""


class ConfigError(RulemineError):
    """A configuration value violates its documented range or relationship."""
