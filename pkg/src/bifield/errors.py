"""Exception and warning types shared across the package."""


class BifieldError(Exception):
    """Base class for all errors raised by this package."""


class GridError(BifieldError, ValueError):
    """Invalid grid parameters (odd mode count, nonpositive spacing, ...)."""


class WeightError(BifieldError, ValueError):
    """Weight function is singular, nonpositive, or undefined at a grid point."""


class GridMismatchError(BifieldError, ValueError):
    """Two objects built on incompatible grids were combined."""


class IllConditionedBasisError(BifieldError, ValueError):
    """Basis matrix is numerically singular beyond the configured limit."""


class DegenerateSpectrumError(BifieldError, ValueError):
    """Eigenvalue degeneracy where a non-degenerate spectrum is required."""


class UntaggedOperatorError(BifieldError, ValueError):
    """Bio-conjugation requested for a term without a weight factorization."""


class SideTagMismatchError(BifieldError, ValueError):
    """Evolution side does not match the basis tag of a state or operator term."""


class InvalidExpectationError(BifieldError, ValueError):
    """Expectation value requested for a state outside its domain of validity."""


class NormalizationError(BifieldError, ValueError):
    """State does not satisfy the normalization required by an observable."""


class ConfigError(BifieldError, ValueError):
    """Scenario configuration file is malformed or inconsistent."""


class WrapAroundWarning(UserWarning):
    """A wave packet has not decayed at the periodic domain edge."""
