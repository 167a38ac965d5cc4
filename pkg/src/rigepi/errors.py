"""Exception types shared across the package."""


class DomainError(ValueError):
    """A parameter is outside the model's admissible range."""


class CapacityError(RuntimeError):
    """A computation would exceed a configured truncation or budget cap."""


class NoWedgesError(DomainError):
    """Transitivity is undefined: the graph has no path of length two."""
