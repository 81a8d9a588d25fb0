class SnowtrackError(ValueError):
    """Base class of every error raised by snowtrack"""


class GluingError(SnowtrackError):
    """Invalid pants decomposition (slot arity, disconnected dual graph, genus < 2...)"""


class CoordinateError(SnowtrackError):
    """Inadmissible Dehn-Thurston coordinates or arc counts"""


class TrackError(SnowtrackError):
    """Malformed train track, illegal move or mismatched weight vector"""


class GuideError(SnowtrackError):
    """A guide can not direct a derivation (zero weight, tie at a cusp, no progress)"""


class BudgetExceeded(SnowtrackError):
    """A configured split budget ran out before the construction finished"""


class CertificateError(SnowtrackError):
    """A certificate hypothesis failed. `hypothesis` names it."""

    def __init__(self, hypothesis: str, message: str = ""):
        self.hypothesis = hypothesis
        super().__init__(f"[{hypothesis}] {message}" if message else hypothesis)
