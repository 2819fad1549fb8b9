"""Exception types shared across the package.

Every error raised on a documented failure path derives from LeviError so
callers (and the CLI) can distinguish configuration problems from numerical
ones with a single isinstance check.
"""


class LeviError(Exception):
    """Base class for all package errors."""


class ValidationError(LeviError):
    """One or more setup invariants are violated.

    Carries the complete list of Violation records, not just the first.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        lines = ", ".join(f"{v.field}: {v.reason}" for v in self.violations)
        super().__init__(f"{len(self.violations)} invariant violation(s): {lines}")


class ParseError(LeviError):
    """Configuration file is malformed (unknown key, wrong type, bad JSON)."""


class SpecError(LeviError):
    """Sweep specification is malformed (bad axis names, counts, scheme)."""


class ZeroDenominator(LeviError):
    """Steady-state amplitude requested at zero detuning with no decay."""


class ResonantDenominator(LeviError):
    """A sideband denominator in a second-order coupling is too close to zero."""


class BothZero(LeviError):
    """Balance residual undefined because both effective couplings vanish."""


class DegenerateSpectrum(LeviError):
    """Conditional spectrum is at (or too near) an exceptional point."""


class NoTransfer(LeviError):
    """No real transfer time exists for the requested scheme parameters."""


class VanishedBranch(LeviError):
    """The no-decay branch has decayed below the representable threshold."""


class DimensionTooLarge(LeviError):
    """Requested truncated product basis exceeds the supported size."""


class StepFailure(LeviError):
    """Adaptive integrator step size underflowed."""


class FitDiverged(LeviError):
    """Transfer-rate fit failed to converge or left no oscillation to fit."""


class NotNormalized(LeviError):
    """State vector norm is outside the accepted tolerance of unity."""
