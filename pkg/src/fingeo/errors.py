"""Exception types shared across the package."""


class GeometryError(ValueError):
    """Base class for every error raised by fingeo."""


class NonPrime(GeometryError):
    pass


class DegreeZero(GeometryError):
    pass


class DivisionByZero(GeometryError, ZeroDivisionError):
    pass


class AmbientMismatch(GeometryError):
    pass


class NotComplementary(GeometryError):
    pass


class NotDisjoint(GeometryError):
    pass


class WrongDimension(GeometryError):
    pass


class DimensionMismatch(GeometryError):
    pass


class TooLarge(GeometryError):
    """An enumeration would exceed the configured feasibility cap."""


class NotASpread(GeometryError):
    pass


class HolesNotASubspace(GeometryError):
    pass


class HypothesisViolated(GeometryError):
    pass


class HypothesisUnmet(GeometryError):
    pass


class GoodnessUndefined(GeometryError):
    pass


class GoodnessFails(GeometryError):
    pass


class TooFewCoplanarElements(GeometryError):
    pass


class OvalNotElementary(GeometryError):
    def __init__(self, msg, oval=None):
        super().__init__(msg)
        self.oval = oval


class MissingCertificate(GeometryError):
    pass


class TooFewPoints(GeometryError):
    pass


class BadParams(GeometryError):
    pass


class ParseError(GeometryError):
    pass


class ValidationError(GeometryError):
    pass


class UnknownHarness(GeometryError):
    pass


class SizeBoundUnmet(UserWarning):
    """The size hypothesis of the two-element elementarity criterion fails."""
