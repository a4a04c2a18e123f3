"""Exception types shared across the package."""


class GMError(Exception):
    """Base class for every error raised by gmcocycle."""


class InputError(GMError, ValueError):
    """Malformed or out-of-domain input."""


class ZeroVector(InputError):
    pass


class Singular(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class NotFullRank(InputError):
    pass


class RankDeficient(InputError):
    pass


class NonSquareTerm(InputError):
    pass


class OrientationTranslate(InputError):
    pass


class OrientationPresent(InputError):
    pass


class ZeroCoordinate(InputError):
    pass


class DomainError(InputError):
    pass


class EvenDimension(InputError):
    pass


class NotInSpan(InputError):
    pass


class NotAcyclic(InputError):
    pass


class MinorZero(InputError):
    pass


class TooLarge(InputError):
    pass


class NonIntegral(GMError):
    pass


class NearSingular(GMError):
    """A sample point lies too close to a pole of the regulator."""


class ExtensionDependent(GMError):
    """The simplex has dependent, non-acyclic vertices: no canonical value."""

    def __init__(self, message, vertices=None, where=None):
        super().__init__(message)
        self.vertices = vertices
        self.where = where


class NonConstantDefect(GMError):
    pass


class NonIntegerDefect(GMError):
    pass


class BadHyperplane(GMError):
    """A specialization lands on a slot equal to 1 - 1 = 0."""

    def __init__(self, message, term=None, slot=None):
        super().__init__(message)
        self.term = term
        self.slot = slot
