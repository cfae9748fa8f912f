"""Exception hierarchy.

Every error raised on purpose by the package derives from
:class:`NLCausalityError`, so callers (notably the CLI) can map failure
families onto exit codes.
"""


class NLCausalityError(Exception):
    """Base class for all package errors."""


class IngestionError(NLCausalityError):
    """Input file missing, unreadable or malformed."""


class AlignmentError(NLCausalityError):
    """Series share no common dates."""


class ConfigError(NLCausalityError, ValueError):
    """Invalid run configuration."""


class NumericalError(NLCausalityError, ArithmeticError):
    """Base for failures that arise while computing a statistic."""


class DegenerateSeriesError(NumericalError):
    """Series has zero variance (or is otherwise constant)."""


class EstimationError(NumericalError):
    """Singular or rank-deficient regression design."""


class DegenerateBandwidthError(NumericalError):
    """Bandwidth too small: no neighbours inside the kernel radius."""


class NumericalDegeneracyError(NumericalError):
    """A variance or ratio that must be positive is not."""


class InsufficientSampleError(NumericalError, ValueError):
    """Too few observations for the requested computation."""
