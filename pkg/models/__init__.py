"""Data models for the quantization workbench."""

from .manifold import (
    ManifoldKind,
    ModelManifold,
    PhasePoint,
    ComplexStructure,
    HermitianModelMetric,
)
from .observable import Observable
from .basis import BasisKind, BasisSpec, OperatorMatrix, Representation, WaveFunction, HolomorphicState
from .results import (
    QuantizabilityReport,
    GeneratingAction,
    HolonomyResult,
    PairingResult,
    RoundTripReport,
    BogoliubovGroundState,
    Amplitude,
    FresnelSpec,
    MaslovPhase,
    GeneratorCheck,
    KernelModel,
    KernelDiagonal,
    AsymptoticFit,
    CheckStatus,
    CheckReport,
)

__all__ = [
    'ManifoldKind', 'ModelManifold', 'PhasePoint', 'ComplexStructure', 'HermitianModelMetric',
    'Observable',
    'BasisKind', 'BasisSpec', 'OperatorMatrix', 'Representation', 'WaveFunction', 'HolomorphicState',
    'QuantizabilityReport', 'GeneratingAction', 'HolonomyResult', 'PairingResult', 'RoundTripReport',
    'BogoliubovGroundState', 'Amplitude', 'FresnelSpec', 'MaslovPhase', 'GeneratorCheck',
    'KernelModel', 'KernelDiagonal', 'AsymptoticFit', 'CheckStatus', 'CheckReport',
]
