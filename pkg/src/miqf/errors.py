"""Exception hierarchy.

Every failure raised by the library derives from :class:`MIQFError`, so the
CLI can map library failures to exit code 1 and everything else to 2.
"""


class MIQFError(Exception):
    """Base class for all library errors."""


class DivisionByZero(MIQFError, ZeroDivisionError):
    pass


class MixedDelta(MIQFError, TypeError):
    """Operands live in different quadratic fields."""


class NotHermitian(MIQFError):
    pass


class NotNormalizable(MIQFError):
    """No Gram basis with matrix E_{n,m} is reachable by square scaling."""


class WrongSignature(MIQFError):
    pass


class NotSimilitude(MIQFError):
    pass


class NonPositiveMultiplier(MIQFError):
    pass


class SingularDenominator(MIQFError):
    pass


class LeftDomain(MIQFError):
    pass


class NotInDomain(MIQFError):
    pass


class BadShape(MIQFError, ValueError):
    pass


class InconsistentOmega(MIQFError):
    pass


class NotNormalized(MIQFError):
    pass


class SingularLeadingBlock(MIQFError):
    pass


class RiemannCheckFailed(MIQFError):
    pass


class BadK(MIQFError, ValueError):
    pass


class WrongSignatureN(MIQFError):
    """Exterior powers only exist for signature (1, r-1) or (r-1, 1)."""
