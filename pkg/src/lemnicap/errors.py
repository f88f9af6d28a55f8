"""Exception hierarchy for lemnicap."""


class LemnicapError(Exception):
    """Base class for all lemnicap errors."""


class PoleProximity(LemnicapError):
    """Evaluation point is within the guard radius of a pole."""


class NonConvergence(LemnicapError):
    """Root finder failed to reach the residual tolerance."""

    def __init__(self, message, worst_residual=None):
        super().__init__(message)
        self.worst_residual = worst_residual


class DegenerateInput(LemnicapError):
    """Input is numerically inconsistent with its invariants."""


class LevelNearCriticalValue(LemnicapError):
    """Requested level coincides with a critical modulus; topology is ambiguous."""


class WindowTooSmall(LemnicapError):
    """The level set touches the tracing window boundary."""


class TraceFailure(LemnicapError):
    """Traced curves are inconsistent (missing pole, broken nesting)."""


class OnBoundary(LemnicapError):
    """Query point lies on a traced curve within tolerance."""


class SingularSystem(LemnicapError):
    """Panel system is singular (degenerate geometry)."""


class NegativeWeights(LemnicapError):
    """Equilibrium weights are negative beyond tolerance; under-resolved."""


class UnderResolved(LemnicapError):
    """Independent capacity methods disagree beyond tolerance."""


class CoincidentPoints(LemnicapError):
    """Distinct measures share support points; energy is undefined."""


class SourceOutsideDomain(LemnicapError):
    """Walk source does not lie strictly inside the domain."""


class PivotInsideDomain(LemnicapError):
    """Moebius pivot must lie strictly outside the domain closure."""


class NonAbsorbingWalk(LemnicapError):
    """Too many walks exceeded the step cap without absorbing."""


class CriticalValueOnCircle(LemnicapError):
    """A critical value sits on the target circle; arc images are ambiguous."""


class NotGood(LemnicapError):
    """Rational function is not d-good at the requested level."""


class NoRadiusFound(LemnicapError):
    """No injectivity radius could be certified."""


class NotGoodAtEpsilon(LemnicapError):
    """Perturbed function loses goodness at the requested residue."""
