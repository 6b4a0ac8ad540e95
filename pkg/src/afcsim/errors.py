"""Exception types shared across the package."""


class AfcsimError(Exception):
    """Base class for all afcsim errors."""


class GridMismatchError(AfcsimError, ValueError):
    """Two spectral objects were combined although they live on different grids."""


class PreconditionError(AfcsimError, ValueError):
    """A physics precondition of an operation is violated.

    The message always starts with the name of the offending operation.
    """


class ConfigError(AfcsimError, ValueError):
    """A scenario configuration is malformed or fails validation.

    The message names the offending field.
    """
