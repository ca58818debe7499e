"""Exception types shared across the package."""


class KnotParityError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(KnotParityError):
    """Malformed input code; ``token_index`` points at the offending token."""

    def __init__(self, message, token_index=None):
        if token_index is not None:
            message = f"{message} (token {token_index})"
        super().__init__(message)
        self.token_index = token_index


class OddLength(ParseError):
    pass


class BadMultiplicity(ParseError):
    pass


class MissingPassage(ParseError):
    pass


class SignMismatch(ParseError):
    pass


class AbsentChord(KnotParityError):
    pass


class IllegalMove(KnotParityError):
    pass


class GroupMismatch(KnotParityError):
    pass


class NotACycle(KnotParityError):
    pass


class NotColourable(KnotParityError):
    pass


class InsufficientDecoration(KnotParityError):
    pass


class IllegalWalk(KnotParityError):
    pass


class StateExplosion(KnotParityError):
    pass


class ClassifierInconclusive(KnotParityError):
    pass
