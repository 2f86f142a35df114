"""Exception types raised across the package."""


class BopsError(ValueError):
    """Base class for input errors."""


class InvalidParameterError(BopsError):
    """A model parameter or operation argument violates its constraint."""


class RegionInadmissibleError(BopsError):
    """A solution region was requested under prices where it cannot occur."""


class InvalidAxisError(BopsError):
    """A region-map axis names an unsupported parameter or has a bad range."""


class InvalidConfigError(BopsError):
    """A simulation configuration field is out of range."""


class ScenarioError(BopsError):
    """A scenario document could not be parsed.

    ``lineno`` is 1-based, or ``None`` when the problem is not tied to a line.
    """

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
