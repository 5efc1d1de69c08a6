"""Semantic exception hierarchy. Public functions raise these, never bare ValueError."""


class RankPError(Exception):
    """Base error for this package."""


class DomainError(RankPError, ValueError):
    """An argument violates a mathematical precondition (p <= 1, d < c, y < 0, ...)."""


class ConfigError(RankPError, ValueError):
    """A run configuration is malformed (bad grid, empty input stream, unknown preset)."""
