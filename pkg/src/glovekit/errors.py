"""Exception hierarchy shared across the pipeline.

DataError maps to CLI exit status 2, NumericError to exit status 3.
"""


class GloveKitError(Exception):
    pass


class DataError(GloveKitError):
    """Malformed, missing, or inconsistent input data."""


class NumericError(GloveKitError):
    """Non-finite values produced during training."""
