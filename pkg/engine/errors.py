"""Error types raised by the quantization engine."""


class QuantizationError(ValueError):
    """Base class for every engine failure a check can report."""


class UnsupportedManifoldError(QuantizationError):
    """Operation is not defined on this kind of model manifold."""


class DimensionMismatchError(QuantizationError):
    """Operands live on phase spaces of different dimension."""


class FlowBlowupError(QuantizationError):
    """Integrated trajectory left the configured bound."""


class DegenerateLatticeError(QuantizationError):
    """Lattice generators are not R-linearly independent."""


class StencilOutOfDomainError(QuantizationError):
    """Finite-difference stencil reaches outside the model chart."""


class OpenLoopError(QuantizationError):
    """Polyline passed as a loop does not close."""


class PolarizationNotPreservedError(QuantizationError):
    """Observable's flow does not preserve the chosen polarization."""


class NonHermitianInputError(QuantizationError):
    """Matrix claimed hermitian fails the hermiticity threshold."""


class TailMassError(QuantizationError):
    """State carries too much mass outside the resolved region."""


class QuadratureNonconvergenceError(QuantizationError):
    """Refinement did not reach the requested agreement."""


class SingularSumError(QuantizationError):
    """J1 + J2 is (numerically) singular."""


class IllConditionedFitError(QuantizationError):
    """Regression residual above the accepted threshold."""
