"""Exception types shared across the toolkit."""


class RcsKitError(Exception):
    """Base class for all rcskit errors."""


class SchemaError(RcsKitError):
    """Input file violates a declared CSV/JSON schema."""


class InvalidParams(RcsKitError, ValueError):
    """Distribution or model parameters violate their constraints."""


class NonPositiveSample(RcsKitError, ValueError):
    """A positive-support family was given a sample value <= 0."""


class DegenerateSample(RcsKitError, ValueError):
    """Sample has zero variance; no distribution can be fitted."""


class NonConvergence(RcsKitError):
    """An iterative solver exhausted its budget without converging."""


class InsufficientData(RcsKitError, ValueError):
    """Too few observations for the requested operation."""


class DegenerateGeometry(RcsKitError, ValueError):
    """Observation distances do not span enough range to identify the model."""


class NonPositiveRcs(RcsKitError, ValueError):
    """A deterministic RCS model evaluated to a nonpositive cross section."""


class CalibrationMismatch(RcsKitError, ValueError):
    """Calibration factor reused at a different (wavelength, distance) pair."""
