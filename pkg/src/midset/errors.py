"""Exception and warning types raised by the midset engine."""


class MidsetError(Exception):
    """Base class for runtime failures inside the engine."""


class HullsIntersect(MidsetError):
    """Convex hulls of the two focal sets overlap or touch."""


class NoSeparation(MidsetError):
    """No pair of separating supporting lines passes through the query point."""


class InsideHull(MidsetError):
    """Query point lies inside (or on) one of the convex hulls."""


class SameSign(MidsetError):
    """Bracket endpoints do not enclose a sign change."""


class NotAGraph(MidsetError):
    """Chain is not a graph over the ray in the requested window."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of a formula."""


class EmptyInput(ValueError):
    pass


class ParseError(ValueError):
    """Malformed scene file. ``location`` names the line/column or field path."""

    def __init__(self, message, location=None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class ValidationError(ValueError):
    """Scene or configuration failed a named check."""

    def __init__(self, check, message):
        self.check = check
        super().__init__(message)


class DepthExhausted(UserWarning):
    """Straddle cells at maximum depth are still larger than the spatial tolerance."""
