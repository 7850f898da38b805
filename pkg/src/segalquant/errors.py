"""Exception types shared across the package."""


class SegalQuantError(Exception):
    """Base class for all package-specific errors."""


class SpecError(SegalQuantError, ValueError):
    """Invalid frequency specification (nonpositive frequency, bad weights, ...)."""


class DimensionMismatchError(SegalQuantError, ValueError):
    """Vector or matrix arguments do not match the system dimension."""


class MetricError(SegalQuantError, ValueError):
    """Metric matrix is singular, non-symmetric or not positive definite."""


class DegenerateFormError(SegalQuantError, ValueError):
    """Bilinear form is numerically degenerate (condition number too large)."""


class NotNaturallyComplexError(SegalQuantError, ValueError):
    """Operator does not square to -identity within tolerance."""


class InconsistencyError(SegalQuantError, RuntimeError):
    """Derived quantities violate a structural identity they should satisfy."""


class ConstraintStructureError(SegalQuantError, RuntimeError):
    """The metric constraint system has an empty solution space."""


class ScanFailureError(SegalQuantError, RuntimeError):
    """No restart of the uniqueness scan converged."""


class ResourceLimitError(SegalQuantError, RuntimeError):
    """Requested computation exceeds the configured memory budget."""


class RangeError(SegalQuantError, ValueError):
    """Numeric argument outside the representable/finite range."""


class ConfigError(SegalQuantError, ValueError):
    """Malformed run configuration."""
