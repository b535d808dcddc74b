"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes, so callers that want to distinguish a
refusal from a genuine failure should catch the specific subclass.
"""


class PottsError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(PottsError, ValueError):
    """Invalid parameters (domain violations, malformed generator specs)."""


class SizeError(PottsError):
    """An exhaustive routine was asked to run above its size guard."""


class RegularityError(ParameterError):
    """A routine that needs a d-regular graph received an irregular one."""


class PreconditionError(PottsError, ValueError):
    """A documented precondition on the input does not hold."""


class DegenerateError(PottsError):
    """A polymer model is degenerate (zero decay, zero f) for the requested check."""


class RegimeError(PottsError):
    """Parameters fall in the excluded window around the order-disorder threshold."""


class KPFailure(PottsError):
    """The Kotecky-Preiss audit failed, so no error bound can be certified."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class SamplingError(PottsError):
    """A rejection sampler exhausted its retry budget."""


class ConsistencyError(PottsError):
    """A computed probability left [0, 1] beyond the clamping tolerance."""
