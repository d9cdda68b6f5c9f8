"""Exception types shared across the package.

Every error is a ``ValueError`` subclass so callers that only care about
"bad input" can catch one thing; the CLI prints the class name.
"""

from __future__ import annotations


class RepairError(ValueError):
    """Base class for all errors raised by rsrepair."""


# --- fields -----------------------------------------------------------------

class NonIrreducibleModulus(RepairError):
    pass


class DegreeNotDividing(RepairError):
    pass


class NoDefaultModulus(RepairError):
    pass


class SingularGram(RepairError):
    pass


class NotInSpan(RepairError):
    pass


# --- polynomials and codes --------------------------------------------------

class DuplicatePoint(RepairError):
    pass


class InvalidCode(RepairError):
    pass


class AlphaNotInS(RepairError):
    pass


class AlphaStarInS(RepairError):
    pass


class MessageDegreeTooHigh(RepairError):
    pass


class TooLargeToEnumerate(RepairError):
    pass


# --- repair schemes ---------------------------------------------------------

class InvalidScheme(RepairError):
    pass


class DegreeTooHigh(InvalidScheme):
    def __init__(self, alpha_star: int, index: int, degree: int, limit: int):
        self.alpha_star = alpha_star
        self.index = index
        super().__init__(
            f"polynomial {index} for alpha*={alpha_star:x} has degree {degree}, "
            f"needs < {limit}"
        )


class RankDeficientAtStar(InvalidScheme):
    def __init__(self, alpha_star: int, rank: int, t: int):
        self.alpha_star = alpha_star
        self.rank = rank
        super().__init__(
            f"values at alpha*={alpha_star:x} span dimension {rank} over B, need {t}"
        )


class PointNotInCode(RepairError):
    pass


class NotADualCodeword(RepairError):
    pass


class SchemeFormatError(RepairError):
    pass


# --- constructions ----------------------------------------------------------

class KTooLarge(RepairError):
    pass


class AMustBeWholeField(RepairError):
    pass


class OddExtension(RepairError):
    pass


class NTooLarge(RepairError):
    pass


class KEqualsN(RepairError):
    pass


# --- bounds -----------------------------------------------------------------

class InvalidDimensions(RepairError):
    pass


class LocalityTooSmall(RepairError):
    pass


# --- search -----------------------------------------------------------------

class SearchSpaceTooLarge(RepairError):
    pass


class NoValidTuple(RepairError):
    pass


class WrongCode(RepairError):
    pass
