"""Shared exception types.

Every domain error raised by this package derives from ObservementError so
callers (including the CLI) can separate bad inputs from genuine bugs.
"""


class ObservementError(Exception):
    """Base class for all domain errors raised by this package."""


class CapExceeded(ObservementError):
    """A configured search or output cap would be exceeded.

    Raised instead of silently truncating, so "proved absent" and "gave up"
    stay distinguishable.
    """
