class ResolutionError(Exception):
    """Base class for errors raised by eqresolve."""


class DimensionMismatch(ResolutionError, ValueError):
    pass


class CapExceeded(ResolutionError):
    """Group closure exceeded the configured element cap."""


class NotOrthogonal(ResolutionError, ValueError):
    pass


class NotASubgroup(ResolutionError, ValueError):
    pass


class StratumEmpty(ResolutionError):
    pass


class UnsupportedModel(ResolutionError, ValueError):
    pass


class CenterNotPSubmanifold(ResolutionError):
    pass


class FaceEmpty(ResolutionError):
    pass


class UnverifiedInput(ResolutionError):
    pass


class CollectionNotDisjoint(ResolutionError, ValueError):
    pass


class CollectionNotInvariant(ResolutionError, ValueError):
    pass


class SpecError(ResolutionError, ValueError):
    """Malformed model specification."""
