"""Exception types shared across the package."""


class LassodfError(Exception):
    """Base class for all package errors."""


class DataError(LassodfError):
    """Malformed or unusable input data (parsing, constant columns, shapes)."""


class RankDeficiencyError(LassodfError):
    """The design (or an active-set Gram matrix) is numerically rank deficient."""


class DegeneracyError(LassodfError):
    """Two path events coincide (tied transition); the one-at-a-time
    assumption fails for this response vector."""


class ConvergenceError(LassodfError):
    """An iterative solver hit its iteration cap before reaching tolerance."""
