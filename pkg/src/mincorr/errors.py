"""Exception hierarchy shared by every module."""


class MinCorrError(Exception):
    """Base class for all errors raised by mincorr."""


class DimensionError(MinCorrError, ValueError):
    """Array shapes do not match the declared subsystem dimensions."""


class ValidationError(MinCorrError, ValueError):
    """Input fails a physical validity check."""


class HermiticityError(ValidationError):
    pass


class TraceError(ValidationError):
    pass


class NegativityError(ValidationError):
    pass


class NormalizationError(ValidationError):
    pass


class CapacityError(ValidationError):
    """Requested construction does not fit in the given dimensions."""


class NumericalError(MinCorrError):
    """A computed quantity violates an invariant it must satisfy."""


class UnsupportedDimensionError(MinCorrError, ValueError):
    """Operation only defined for particular factor dimensions."""


class DegenerateMarginalError(NumericalError):
    """A construction that needs nondegenerate marginals received degenerate ones."""
