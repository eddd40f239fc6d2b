"""Exception types shared across the package."""


class SingularityError(ValueError):
    """A closed form was requested at a parameter point where it degenerates."""


class BranchAmbiguityError(ValueError):
    """Root selection cannot decide which branch continues the z=0 germ."""


class PoleError(ArithmeticError):
    """Pointwise evaluation hit a pole of a generating function."""


class DelocalizedError(ValueError):
    """An edge-state quantity was requested outside the localized regime."""


class ResourceLimitError(RuntimeError):
    """A hard cap (path length, step count) would be exceeded."""
