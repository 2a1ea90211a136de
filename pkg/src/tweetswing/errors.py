"""Exceptions shared across pipeline stages."""


class ConfigError(Exception):
    """A term table, lexicon, baseline file, or run configuration is invalid."""


class NoPositiveSignalError(Exception):
    """Every reported group has a non-positive sentiment total, so shares
    cannot be normalised. Raised instead of silently emitting zeros."""
