"""Exception hierarchy shared by every layer of the engine."""

from __future__ import annotations


class GVAError(Exception):
    """Base class for all engine errors."""


class DivisionByZero(GVAError, ZeroDivisionError):
    pass


class NonSummable(GVAError):
    """A product or sum of formal series is not well defined."""


class PrecisionTooSmall(GVAError):
    """The requested window cannot be enumerated or is too small."""


class DimensionMismatch(GVAError):
    pass


class NotIntegral(GVAError):
    pass


class DegenerateForm(GVAError):
    pass


class InvalidInvariant(GVAError):
    pass


class InvalidEta(GVAError):
    """The supplied eta-matrix is incompatible with the bilinear form."""


class IncompatibleLattices(GVAError):
    pass


class NotHomogeneous(GVAError):
    pass


class ZeroState(GVAError):
    pass


class CosetMismatch(GVAError):
    """A mode index lies outside the coset required by the charges."""


class ChargeOutsideCoset(GVAError):
    pass


class DictionaryMismatch(GVAError):
    pass


class PreconditionFailed(GVAError):
    pass


class ParseError(GVAError):
    """Malformed expression; ``pos`` is the offending character offset."""

    def __init__(self, message: str, pos: int = 0, text: str = "") -> None:
        self.pos = pos
        self.text = text
        super().__init__(f"{message} (at position {pos})")


class UnknownBasisName(ParseError):
    pass
