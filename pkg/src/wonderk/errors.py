"""Exception hierarchy.

ValidationError covers bad user input (CLI exit 1); InternalError covers
broken internal invariants that should never occur on valid input
(CLI exit 2).
"""


class WonderKError(Exception):
    pass


class ValidationError(WonderKError):
    pass


class InternalError(WonderKError):
    pass


class InvalidCartanLabel(ValidationError):
    pass


class RankBoundExceeded(ValidationError):
    pass


class NotMinimalRep(ValidationError):
    pass


class BlockMismatch(ValidationError):
    pass


class ZeroCharacter(ValidationError):
    pass


class NotSmooth(ValidationError):
    pass


class SupportMismatch(ValidationError):
    pass


class NotFaceClosed(ValidationError):
    pass


class ConeNotInFan(ValidationError):
    pass


class MissingCone(ValidationError):
    pass


class NotMember(ValidationError):
    pass


class NotInSubring(ValidationError):
    pass


class NotInvariant(ValidationError):
    pass


class UnknownSuite(ValidationError):
    pass


class TimeoutExceeded(WonderKError):
    """Cooperative deadline hit; carries a partial-progress report."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class SingularSystem(InternalError):
    pass


class SupportViolation(InternalError):
    pass


class ExactDivisionError(InternalError):
    pass
