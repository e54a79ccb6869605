"""Exception taxonomy shared across the package.

Every error raised on purpose derives from GmcLabError so callers (and the
command line front end) can separate usage/validation problems from genuine
numerical failures.
"""


class GmcLabError(Exception):
    """Base class for all errors raised by gmclab."""


class ValidationError(GmcLabError):
    """Malformed input data: bad atom table, bad file contents."""


class DomainError(GmcLabError):
    """Parameter outside its admissible range; the message names the violated constraint."""


class SingularityError(GmcLabError):
    """Evaluation requested exactly on a kernel singularity."""


class ResourceLimitError(GmcLabError):
    """Requested object is larger than the configured safety limits."""


class EmptyMeasureError(GmcLabError):
    """A generator produced no atoms."""


class SplitInfeasibleError(GmcLabError):
    """No admissible half-plane split exists for the given measure."""


class HypothesisViolationError(GmcLabError):
    """An inequality harness found its structural hypothesis violated; treat as a skip."""


class NumericalError(GmcLabError):
    """A numerical routine failed; the message carries diagnostics."""
