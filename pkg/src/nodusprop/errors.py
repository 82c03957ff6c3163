"""Exception hierarchy shared across the toolkit.

Two broad families matter for the CLI exit-code contract: input problems
(bad files, broken invariants) and numerical/model failures (divergence,
model leaving its validity domain).
"""


class NodusError(Exception):
    """Base class for all toolkit errors."""


class InputError(NodusError):
    """Bad user input: unreadable/malformed files, invalid parameters."""


class ParseError(InputError):
    """A file could not be parsed; message carries location context."""


class ValidationError(InputError):
    """Structurally valid data violating a documented invariant."""


class ModelError(NodusError):
    """Numerical or model-domain failure during computation."""


class DomainError(ModelError):
    """Query outside the mathematical domain of an operation."""


class FitError(ModelError):
    """Least-squares fit is under-determined or ill-conditioned."""


class InfeasibleGeometryError(ModelError):
    """Fiber packing exceeds the available composite cross-section."""


class ModelDomainError(ModelError):
    """Constitutive model evaluated outside its validity region."""


class NearSingularPitchError(ModelError):
    """cos(theta) vanishes somewhere on the integration span."""


class DivergenceError(ModelError):
    """Fixed-point iteration produced a non-finite state."""

    def __init__(self, message, iteration=None):
        super().__init__(message)
        self.iteration = iteration


class SweepError(ModelError):
    """One or more sweep points failed to solve."""

    def __init__(self, message, failed_speeds=()):
        super().__init__(message)
        self.failed_speeds = tuple(failed_speeds)


class EstimationError(ModelError):
    """Vision-pipeline estimate could not be formed (degenerate data)."""


class InconsistentMeasurementError(ModelError):
    """Measured radius incompatible with the rest-state geometry."""


class UndefinedNormalError(ModelError):
    """Reaction normal undefined because pre-collision velocity is zero."""


class SimulationError(ModelError):
    """Recovery simulation produced a non-finite state."""
