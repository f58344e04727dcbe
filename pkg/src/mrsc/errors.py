"""Exception types shared across the package."""


class DimensionError(ValueError):
    """A dimension argument is outside the valid range."""


class MembershipError(KeyError):
    """A simplex that was required to be present is absent."""


class ResourceBudgetError(RuntimeError):
    """An operation would exceed its configured memory/size budget."""

    def __init__(self, message, expected=None):
        super().__init__(message)
        self.expected = expected


class TreeShapeError(ValueError):
    """Input complex is not tree-shaped where a tree is required."""


class ConfigError(ValueError):
    """Invalid experiment or generator configuration."""
