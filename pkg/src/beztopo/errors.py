"""Exception types shared across the toolkit."""


class DomainError(ValueError):
    """A parameter lies outside the domain an operation is defined on."""


class UnsupportedDegreeError(ValueError):
    """Curve degree exceeds the exact-binomial cap."""


class DegenerateInputError(ValueError):
    """Geometrically degenerate input (zero-length edge, collapsed triangle)."""


class ObjectiveFailureError(RuntimeError):
    """An objective function returned NaN during minimization."""


class AmbiguousCrossingError(RuntimeError):
    """A projected intersection whose two heights are too close to call."""


class InputFormatError(ValueError):
    """A polygon/report file could not be parsed."""
