class GradedRegError(Exception):
    """Base class for every error raised by gradedreg."""


class InputError(GradedRegError, ValueError):
    """Malformed user input (bad polynomial text, bad document, bad ring)."""


class ParseError(InputError):
    pass


class NonHomogeneousInput(InputError):
    pass


class InvalidGraph(InputError):
    pass


class BadPieceIndex(InputError):
    pass


class MixedDegrees(InputError):
    pass


class UnknownSuite(InputError):
    pass


class NotStandardGraded(InputError):
    pass


class CharZero(InputError):
    pass


class OrderMismatch(InputError):
    pass


class NotWellDefined(InputError):
    pass


class NotArtinian(InputError):
    pass


class WindowError(GradedRegError):
    """A computation would need data beyond a recorded truncation degree."""


class WindowExceeded(WindowError):
    pass


class DegreeCapExceeded(WindowError):
    pass


class UnsoundWindow(WindowError):
    pass
