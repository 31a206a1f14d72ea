"""Exception types shared across the package."""


class KvnLabError(Exception):
    """Base class for all package-specific errors."""


class DomainError(KvnLabError):
    """Evaluation requested outside the admissible position domain."""


class UndefinedError(KvnLabError):
    """Quantity is undefined for the given parameters (e.g. exponent 0)."""


class SingularityAbort(KvnLabError):
    """Trajectory approached the potential singularity closer than rmin."""


class StepFailure(KvnLabError):
    """Adaptive integrator could not meet the local error target."""


class HarmonicCaseError(KvnLabError):
    """Operation requires n != 2; use the harmonic variant instead."""


class NullLiouvillianError(KvnLabError):
    """Liouvillian magnitude below threshold; charge family undefined."""


class NegativeBaseError(KvnLabError):
    """Negative base raised to a non-integer exponent."""


class NonFiniteGradient(KvnLabError):
    """Gradient evaluation produced a non-finite component."""


class InsufficientResolution(KvnLabError):
    """Sampled trajectory is too coarse for the requested quadrature."""


class DegenerateAction(KvnLabError):
    """Action magnitude too small for a meaningful scaling exponent."""


class NonPolynomialPotential(KvnLabError):
    """Operator construction requires an integer exponent n >= 1."""


class InexactHbarDivision(KvnLabError):
    """Internal consistency failure: coefficient not divisible by hbar."""


class NonQuadraticGenerator(KvnLabError):
    """Finite adjoint requires a quadratic generator (closed linear action)."""


class NoBoundOrbit(KvnLabError):
    """Energy does not select a bounded classical orbit for this potential."""


class RangeExhausted(KvnLabError):
    """Bracket expansion failed to enclose the requested root."""


class ConvergenceFailure(KvnLabError):
    """Iterative refinement did not reach the requested tolerance."""


class NonNormalizable(KvnLabError):
    """Grid state has zero or non-finite norm."""


class SupportExit(KvnLabError):
    """Mapped state support left the grid by more than the allowed budget."""


class ScenarioError(KvnLabError):
    """Scenario file failed schema validation."""


class CheckFailure(KvnLabError):
    """A suite check completed but its verdict is fail."""
