"""Shared error base class.

Every error raised by this package subclasses :class:`ShopRankError`, so
callers (notably the CLI) can catch one type and map it to a diagnostic
line and exit code.
"""


class ShopRankError(Exception):
    """Base class for all shoprank errors."""
