"""Exception hierarchy shared by all modules."""


class ToricError(ValueError):
    """Base class for every error raised by this package."""


class BadShape(ToricError):
    pass


class NegativeEntry(ToricError):
    pass


class RankDeficient(ToricError):
    pass


class DimensionTooLarge(ToricError):
    pass


class NotIntegrable(ToricError):
    pass


class NotConverged(ToricError):
    pass


class SingularGram(ToricError):
    pass


class ResonantParameters(ToricError):
    pass


class StencilOutOfRange(ToricError):
    pass


class ConfigError(ToricError):
    """Invalid job configuration; ``field`` names the offending entry."""

    def __init__(self, message, field=None):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)
