"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input outside the supported domain (symbol < 1, bad parameter, ...)."""


class EndOfStream(EOFError):
    """A bit source was asked for more bits than it holds."""


class MalformedStream(ValueError):
    """A compressed stream is invalid, truncated, or out of range."""


class PrecisionOverflow(OverflowError):
    """A frequency total exceeds the range coder's capacity."""


class MembershipError(ValueError):
    """A source distribution violates the envelope class it was paired with."""
