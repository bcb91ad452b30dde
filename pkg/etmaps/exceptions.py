class MapError(ValueError):
    """Base class for the errors raised by etmaps."""


# field errors ----------------------------------------------------------------


class NotPrime(MapError):
    pass


class NotPrimePower(MapError):
    pass


class NotPrimitive(MapError):
    pass


class ZeroElement(MapError):
    pass


class DivisionByZero(MapError, ZeroDivisionError):
    pass


# map errors ------------------------------------------------------------------


class InvalidRotation(MapError):
    pass


class InvalidFlagMap(MapError):
    pass


class GenusUndefined(MapError):
    """Raised when a genus is requested for a map with boundary."""


class BoundaryNotSupported(MapError):
    """Raised by operations that only make sense for closed maps."""


class NotOrientableRepresentation(MapError):
    pass


# construction errors ---------------------------------------------------------


class BadGeneratingSet(MapError):
    pass


class BadCongruence(MapError):
    pass


class BadJ(MapError):
    pass


class NotFree(MapError):
    pass


# census errors ---------------------------------------------------------------


class TooLarge(MapError):
    pass


class Unsupported(MapError):
    pass
