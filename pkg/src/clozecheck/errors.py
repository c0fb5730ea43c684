"""Exception types shared across the pipeline.

The three concrete classes map one-to-one onto CLI exit codes so that
callers can script against failures:

    ConfigError    -> exit 1 (bad configuration, missing input paths)
    DataError      -> exit 2 (malformed records, violated invariants)
    TransportError -> exit 3 (remote service unreachable after retries)
"""


class ClozeCheckError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(ClozeCheckError):
    """Configuration or input validation failed before any work started."""


class DataError(ClozeCheckError):
    """A record or response violated a contract; the data is not trustworthy."""


class TransportError(ClozeCheckError):
    """A remote call failed in a way that retrying might fix (and retries ran out)."""
