"""Result types produced by the engine and the check suites."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np


@dataclass
class QuantizabilityReport:
    """Outcome of an integrality (PC1) check on one or more compact cycles."""

    integral_value: float
    ratio: float
    is_integral: bool
    nearest_admissible_parameters: List[float] = field(default_factory=list)

    # Per-cycle ratios (product manifolds report one per factor)
    factor_ratios: List[float] = field(default_factory=list)
    period: float = 2.0 * np.pi
    quadrature_error: float = 0.0

    def to_dict(self) -> dict:
        return {
            'integral_value': self.integral_value,
            'ratio': self.ratio,
            'is_integral': self.is_integral,
            'nearest_admissible_parameters': list(self.nearest_admissible_parameters),
            'factor_ratios': list(self.factor_ratios),
            'period': self.period,
            'quadrature_error': self.quadrature_error,
        }


@dataclass
class GeneratingAction:
    """Value of the generating function along a numerically integrated flow."""

    value: float
    error_estimate: float
    relative_error: float
    final_point: np.ndarray
    energy_drift: float
    steps: int

    def to_dict(self) -> dict:
        return {
            'value': self.value,
            'error_estimate': self.error_estimate,
            'relative_error': self.relative_error,
            'final_point': self.final_point.tolist(),
            'energy_drift': self.energy_drift,
            'steps': self.steps,
        }


@dataclass
class HolonomyResult:
    action: float
    phase: complex

    def to_dict(self) -> dict:
        return {'action': self.action, 'phase': self.phase}


@dataclass
class PairingResult:
    """BKS pairing value with the disagreement between evaluation routes."""

    value: complex
    quadrature_error_estimate: float
    alternate_value: Optional[complex] = None

    def __post_init__(self):
        if self.quadrature_error_estimate < 0:
            raise ValueError(f"error estimate must be >= 0, got {self.quadrature_error_estimate}")

    def to_dict(self) -> dict:
        return {
            'value': self.value,
            'quadrature_error_estimate': self.quadrature_error_estimate,
            'alternate_value': self.alternate_value,
        }


@dataclass
class RoundTripReport:
    """P ∘ P' on the truncated Hermite space."""

    multiple: float
    identity_defect: float
    is_positive_multiple: bool
    printed_kernel_signs: List[int]
    conjugation_needed: bool

    def to_dict(self) -> dict:
        return {
            'multiple': self.multiple,
            'identity_defect': self.identity_defect,
            'is_positive_multiple': self.is_positive_multiple,
            'printed_kernel_signs': list(self.printed_kernel_signs),
            'conjugation_needed': self.conjugation_needed,
        }


@dataclass
class BogoliubovGroundState:
    """Projection of the J2 vacuum into the J1 Fock space.

    ``lambda_real`` / ``lambda_imag`` hold the symmetric matrices of
    λ(v) = vᵀ(A_re + i A_im)v on real coordinates v = (x, y).
    """

    det_factor: complex
    lambda_real: np.ndarray
    lambda_imag: np.ndarray
    L: np.ndarray
    exponent_scale: float = 0.125

    def lam(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        re = np.einsum('...i,ij,...j->...', v, self.lambda_real, v)
        im = np.einsum('...i,ij,...j->...', v, self.lambda_imag, v)
        return re + 1j * im

    def amplitude(self, v: np.ndarray) -> np.ndarray:
        """Holomorphic factor det_factor · exp(exponent_scale · λ(v))."""
        return self.det_factor * np.exp(self.exponent_scale * self.lam(v))

    def section(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        return self.amplitude(v) * np.exp(-np.sum(v * v, axis=-1) / 4.0)

    def to_dict(self) -> dict:
        return {
            'det_factor': self.det_factor,
            'lambda_real': self.lambda_real.tolist(),
            'lambda_imag': self.lambda_imag.tolist(),
            'L': self.L.tolist(),
            'exponent_scale': self.exponent_scale,
        }


class Amplitude(str, Enum):
    ONE = "1"
    QUADRATIC = "pj*pl"


@dataclass(frozen=True)
class FresnelSpec:
    """Oscillatory Gaussian integral ∫ amplitude · e^{(i/2) a p²} dp^n."""

    n: int
    a: float
    amplitude: Amplitude = Amplitude.ONE
    j: int = 0
    l: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"dimension must be >= 1, got {self.n}")
        if not self.a > 0:
            raise ValueError(f"coefficient a must be positive, got {self.a}")
        if not (0 <= self.j < self.n and 0 <= self.l < self.n):
            raise ValueError(f"amplitude indices ({self.j}, {self.l}) out of range for n={self.n}")

    @classmethod
    def from_physical(cls, n: int, t: float, mass: float = 1.0, hbar: float = 1.0, **kwargs) -> "FresnelSpec":
        return cls(n=n, a=t / (mass * hbar), **kwargs)

    def to_dict(self) -> dict:
        return {'n': self.n, 'a': self.a, 'amplitude': self.amplitude.value, 'j': self.j, 'l': self.l}


@dataclass(frozen=True)
class MaslovPhase:
    """Phase e^{icπ/4} (c mod 8) times a positive magnitude."""

    c: int
    magnitude: float

    def __post_init__(self):
        object.__setattr__(self, 'c', int(self.c) % 8)
        if self.magnitude < 0:
            raise ValueError(f"magnitude must be non-negative, got {self.magnitude}")

    @property
    def unit(self) -> complex:
        return complex(np.exp(1j * self.c * np.pi / 4))

    @property
    def value(self) -> complex:
        return self.magnitude * self.unit

    def to_dict(self) -> dict:
        return {'c': self.c, 'magnitude': self.magnitude}


@dataclass
class GeneratorCheck:
    """First-order pairing expansion against the Schrödinger generator."""

    zeroth: complex
    first_order: np.ndarray
    expected_first_order: np.ndarray
    residual: float
    grid: np.ndarray
    phase: MaslovPhase

    def to_dict(self) -> dict:
        return {
            'zeroth': self.zeroth,
            'residual': self.residual,
            'phase_c': self.phase.c,
            'samples': len(self.grid),
        }


class KernelModel(str, Enum):
    BARGMANN_PLANE = "bargmann"
    PROJECTIVE_LINE = "projective-line"


@dataclass
class KernelDiagonal:
    """Szegő kernel diagonal Π_k(z, z) sampled at chart points."""

    model: KernelModel
    k: int
    samples: List[Tuple[complex, float]]

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"tensor power must be positive, got {self.k}")
        if any(value <= 0 for _, value in self.samples):
            raise ValueError("kernel diagonal values must be positive")

    @property
    def values(self) -> np.ndarray:
        return np.array([value for _, value in self.samples], dtype=float)

    @property
    def mean(self) -> float:
        return float(np.mean(self.values))

    @property
    def homogeneity_defect(self) -> float:
        values = self.values
        return float(values.max() / values.min() - 1.0)

    def to_dict(self) -> dict:
        return {
            'model': self.model.value,
            'k': self.k,
            'mean': self.mean,
            'homogeneity_defect': self.homogeneity_defect,
        }


@dataclass
class AsymptoticFit:
    """Fit of Π_k ≈ a0 k^n + a1 k^(n-1) over a ladder of k."""

    a0: float
    a1: float
    n_hat: float
    residual: float
    normalization: float = 1.0

    def __post_init__(self):
        if self.residual < 0:
            raise ValueError(f"residual must be >= 0, got {self.residual}")

    @property
    def normalized_a0(self) -> float:
        return self.a0 / self.normalization

    @property
    def normalized_a1(self) -> float:
        return self.a1 / self.normalization

    def to_dict(self) -> dict:
        return {
            'a0': self.a0,
            'a1': self.a1,
            'n_hat': self.n_hat,
            'residual': self.residual,
            'normalization': self.normalization,
            'normalized_a0': self.normalized_a0,
            'normalized_a1': self.normalized_a1,
        }


class CheckStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    WARN = "warn"


@dataclass
class CheckReport:
    """One named check with its inputs, outputs and verdict."""

    check_id: str
    inputs: Dict[str, str]
    outputs: Dict[str, Any]
    status: CheckStatus
    tolerances: Dict[str, float] = field(default_factory=dict)
    elapsed_ms: float = 0.0
    message: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.status != CheckStatus.FAIL

    def to_dict(self) -> dict:
        return {
            'check_id': self.check_id,
            'inputs': {k: str(v) for k, v in self.inputs.items()},
            'outputs': self.outputs,
            'status': self.status.value,
            'tolerances': dict(self.tolerances),
            'elapsed_ms': self.elapsed_ms,
            'message': self.message,
        }
