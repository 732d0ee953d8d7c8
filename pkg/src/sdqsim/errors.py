"""Shared exception and warning types."""


class SdqsimError(Exception):
    """Base class for all package errors."""


class ValidationError(SdqsimError):
    """A configuration or parameter violates a documented invariant."""


class ParseError(SdqsimError):
    """A run file could not be parsed."""


class NumericalError(SdqsimError):
    """A numerical routine failed to produce a trustworthy result."""


class InvalidCurrentError(ValidationError):
    """Critical currents must be strictly positive."""


class DegenerateMinimumError(NumericalError):
    """Potential minimum search could not be disambiguated."""


class EmptyModeSetError(ValidationError):
    """A mode set with no modes cannot mediate coupling."""


class ZeroFrequencyError(ValidationError):
    """The classical impedance diverges at zero frequency."""


class SingularSusceptibilityError(NumericalError):
    """The linearized response matrix is singular (parametric instability)."""


class StepFailureError(NumericalError):
    """The adaptive integrator could not meet its tolerance."""


class NonPhysicalStateError(NumericalError):
    """A density matrix is too far from positive semidefinite to score."""


class IncompleteRecordError(ValidationError):
    """A tomography record is missing one or more basis settings."""


class MissingColumnError(ValidationError):
    """An input table lacks a required column."""


class SdqsimWarning(UserWarning):
    """Base class for all package warnings."""


class DegenerateMinimumWarning(SdqsimWarning):
    """Two potential minima are degenerate; a deterministic tie-break applied.

    The warning carries both minimizers in ``minima``.
    """

    def __init__(self, message, minima):
        super().__init__(message)
        self.minima = tuple(minima)


class NonPositiveRateMatrixWarning(SdqsimWarning):
    """Cross-qubit decay exceeds the geometric mean of the individual rates.

    The bare relaxation/cross-decay rate table would not be positive
    semidefinite on its own; the collective-channel realization used here
    stays completely positive, but the regime is flagged for auditing.
    """


class BistableRegionWarning(SdqsimWarning):
    """The pump steady state has three positive photon-number roots."""


class ProbePumpRatioWarning(SdqsimWarning):
    """Probe amplitude is not small compared to the pump."""


class BothZeroWarning(SdqsimWarning):
    """Forward and backward transmission both vanish at some frequencies."""


class PhysicalityWarning(SdqsimWarning):
    """A density matrix eigenvalue dipped below the monitored threshold."""
