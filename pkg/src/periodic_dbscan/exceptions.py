"""Exception types raised by periodic_dbscan."""


class PeriodicDBSCANError(ValueError):
    """Base class for all errors raised by this package."""


class ParameterError(PeriodicDBSCANError):
    """An algorithm parameter is out of its valid range."""


class InputShapeError(PeriodicDBSCANError):
    """Input arrays have the wrong shape or disagree with the domain."""


class InputError(PeriodicDBSCANError):
    """Input values violate a precondition (e.g. coordinates not wrapped)."""
