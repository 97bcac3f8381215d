"""Exception types shared across the package."""


class KLError(Exception):
    """Base class for every error raised by klstab."""


class ParseError(KLError, ValueError):
    pass


class CoefficientOverflow(KLError, OverflowError):
    """A coefficient left the signed 64-bit range."""


class RankExceeded(KLError):
    """An element or computation does not fit in the requested rank."""


class RankMismatch(KLError):
    pass


class BasisMismatch(KLError):
    pass


class ShapeMismatch(KLError):
    pass


class SizeMismatch(KLError):
    pass


class RouteDisagreement(KLError):
    """The recursion and the bilinear-form computations disagree.

    The two routes compute the same number, so this always indicates a bug.
    """


class FormatVersionMismatch(KLError):
    pass


class ChecksumMismatch(KLError):
    pass
