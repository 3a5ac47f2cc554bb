"""Exception types shared across the toolkit."""


class WvlabError(Exception):
    """Base class for all toolkit-specific errors."""


class PoleError(WvlabError, ValueError):
    """An evaluation point coincides with (or is too close to) a pole.

    The offending pole location is carried in ``root``.
    """

    def __init__(self, message, root):
        super().__init__(message)
        self.root = root


class SingularityError(WvlabError, RuntimeError):
    """The width function collapsed below its floor during integration."""

    def __init__(self, message, t):
        super().__init__(message)
        self.t = t


class IntegrationError(WvlabError, RuntimeError):
    """A non-finite derivative was encountered at time ``t``."""

    def __init__(self, message, t):
        super().__init__(message)
        self.t = t


class EvaluationError(WvlabError, ValueError):
    """An integrand returned NaN/Inf; ``coord`` holds the offending point."""

    def __init__(self, message, coord):
        super().__init__(message)
        self.coord = coord


class AccuracyError(WvlabError, RuntimeError):
    """A Richardson/self-consistency check failed its tolerance."""


class ConditioningError(WvlabError, ValueError):
    """A conditional average was requested where the density is ~ 0."""


class DomainError(WvlabError, ValueError):
    """Arguments violate a domain restriction (e.g. limits straddle a pole)."""
