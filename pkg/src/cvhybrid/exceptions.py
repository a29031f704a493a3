"""Exception types raised by the library."""


class InvalidArgument(ValueError):
    """An argument violates an operation's precondition."""


class TruncationNotConverged(RuntimeError):
    """The number-basis oracle did not converge when the cutoff was raised."""


class Unsupported(ValueError):
    """The request is outside what the number-basis oracle can represent."""
