"""Exception types shared across the toolkit."""


class IllusionKitError(ValueError):
    """Base class for all validation and protocol failures."""


class ParameterError(IllusionKitError):
    """A spec parameter is out of its allowed range."""


class DimensionError(IllusionKitError):
    """Requested geometry does not fit the canvas."""


class GeometryError(IllusionKitError):
    """Spec parameters produce degenerate or non-illusory geometry."""


class CompatibilityError(IllusionKitError):
    """A transform was requested on a base family it does not apply to."""


class ConfigurationError(IllusionKitError):
    """A sweep or run configuration is inconsistent or too small."""


class ProtocolError(IllusionKitError):
    """A psychophysics request violates the experimental protocol."""


class FitError(IllusionKitError):
    """Psychometric data cannot be fitted (degenerate or too sparse)."""
