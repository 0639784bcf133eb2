"""Truncated bases, operator matrices and states."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np
from scipy.special import gammaln


class BasisKind(str, Enum):
    FOCK_MONOMIAL = "fock"
    HERMITE = "hermite"


class Representation(str, Enum):
    POSITION = "position"
    MOMENTUM = "momentum"


@dataclass(frozen=True)
class BasisSpec:
    """Truncated orthonormal basis, indices j = 0..N.

    Fock: e_j = z^j / ‖z^j‖ with ‖z^j‖² = (2ℏ)^j j!.
    Hermite: h_j(x / ℓ) / √ℓ with ℓ = √(ℏ / (m ω)).
    """

    kind: BasisKind
    N: int
    hbar: float = 1.0
    mass: float = 1.0
    frequency: float = 1.0

    def __post_init__(self):
        if self.N < 4:
            raise ValueError(f"truncation order N must be >= 4, got {self.N}")
        for name in ('hbar', 'mass', 'frequency'):
            value = getattr(self, name)
            if value <= 0:
                raise ValueError(f"{name} must be positive, got {value}")

    @classmethod
    def fock(cls, N: int, hbar: float = 1.0) -> "BasisSpec":
        return cls(BasisKind.FOCK_MONOMIAL, N, hbar=hbar)

    @classmethod
    def hermite(cls, N: int, hbar: float = 1.0, mass: float = 1.0, frequency: float = 1.0) -> "BasisSpec":
        return cls(BasisKind.HERMITE, N, hbar=hbar, mass=mass, frequency=frequency)

    @property
    def size(self) -> int:
        return self.N + 1

    @property
    def length_scale(self) -> float:
        return float(np.sqrt(self.hbar / (self.mass * self.frequency)))

    def to_dict(self) -> dict:
        return {
            'kind': self.kind.value,
            'N': self.N,
            'hbar': self.hbar,
            'mass': self.mass,
            'frequency': self.frequency,
        }


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Dense matrix of an operator in a truncated basis."""

    entries: np.ndarray
    basis: BasisSpec
    hermitian: bool = False
    interior: Optional[int] = None
    tolerance: float = 1e-10

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex)
        if entries.shape != (self.basis.size, self.basis.size):
            raise ValueError(
                f"matrix shape {entries.shape} does not match basis size {self.basis.size}"
            )
        if not np.all(np.isfinite(entries)):
            raise ValueError("operator matrix has non-finite entries")
        object.__setattr__(self, 'entries', entries)
        if self.interior is None:
            object.__setattr__(self, 'interior', self.basis.N)
        if self.hermitian and self.hermiticity_defect() > self.tolerance:
            from engine.errors import NonHermitianInputError
            raise NonHermitianInputError(
                f"claimed hermitian, defect {self.hermiticity_defect():.3e} > {self.tolerance:.1e}"
            )

    def interior_block(self, size: Optional[int] = None) -> np.ndarray:
        size = self.interior if size is None else size
        return self.entries[:size, :size]

    def hermiticity_defect(self, size: Optional[int] = None) -> float:
        block = self.interior_block(size)
        if block.size == 0:
            return 0.0
        return float(np.max(np.abs(block - block.conj().T)))

    def is_diagonal(self) -> bool:
        return not np.any(self.entries - np.diag(np.diag(self.entries)))

    def __add__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        return OperatorMatrix(self.entries + other.entries, self.basis, interior=self.interior)

    def __sub__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        return OperatorMatrix(self.entries - other.entries, self.basis, interior=self.interior)

    def __mul__(self, scalar: complex) -> "OperatorMatrix":
        return OperatorMatrix(self.entries * scalar, self.basis, interior=self.interior)

    __rmul__ = __mul__

    def __matmul__(self, other: "OperatorMatrix") -> "OperatorMatrix":
        return OperatorMatrix(self.entries @ other.entries, self.basis, interior=self.interior)

    def to_dict(self) -> dict:
        return {
            'basis': self.basis.to_dict(),
            'interior': self.interior,
            'diagonal': [complex(v) for v in np.diag(self.entries)],
        }


@dataclass(frozen=True, eq=False)
class WaveFunction:
    """Coefficients of a state in the Hermite basis of one representation."""

    basis: BasisSpec
    coeffs: np.ndarray
    representation: Representation = Representation.POSITION
    tail_mass: float = 0.0

    def __post_init__(self):
        if self.basis.kind != BasisKind.HERMITE:
            raise ValueError("wave functions live in a Hermite basis")
        coeffs = np.asarray(self.coeffs, dtype=complex).reshape(-1)
        if coeffs.size != self.basis.size:
            raise ValueError(f"expected {self.basis.size} coefficients, got {coeffs.size}")
        if not np.all(np.isfinite(coeffs)):
            raise ValueError("wave function has non-finite coefficients")
        object.__setattr__(self, 'coeffs', coeffs)
        object.__setattr__(self, 'representation', Representation(self.representation))

    @classmethod
    def basis_state(cls, basis: BasisSpec, j: int,
                    representation: Representation = Representation.POSITION) -> "WaveFunction":
        coeffs = np.zeros(basis.size, dtype=complex)
        coeffs[j] = 1.0
        return cls(basis, coeffs, representation)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def inner(self, other: "WaveFunction") -> complex:
        """⟨self, other⟩ = Σ a_j conj(b_j)."""
        return complex(np.sum(self.coeffs * np.conj(other.coeffs)))

    def to_dict(self) -> dict:
        return {
            'basis': self.basis.to_dict(),
            'representation': self.representation.value,
            'coeffs': [complex(c) for c in self.coeffs],
            'tail_mass': self.tail_mass,
        }


@dataclass(frozen=True, eq=False)
class HolomorphicState:
    """Holomorphic function Σ c_j z^j, j = 0..N, in the Fock space."""

    coeffs: np.ndarray
    hbar: float = 1.0
    monomial_norms_sq: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=complex).reshape(-1)
        if not np.all(np.isfinite(coeffs)):
            raise ValueError("holomorphic state has non-finite coefficients")
        object.__setattr__(self, 'coeffs', coeffs)
        j = np.arange(coeffs.size)
        norms = np.exp(j * np.log(2.0 * self.hbar) + gammaln(j + 1))
        object.__setattr__(self, 'monomial_norms_sq', norms)

    @classmethod
    def monomial(cls, m: int, N: Optional[int] = None, hbar: float = 1.0) -> "HolomorphicState":
        N = m if N is None else N
        coeffs = np.zeros(N + 1, dtype=complex)
        coeffs[m] = 1.0
        return cls(coeffs, hbar=hbar)

    @property
    def N(self) -> int:
        return self.coeffs.size - 1

    @property
    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.coeffs) ** 2 * self.monomial_norms_sq)))

    def orthonormal_coeffs(self) -> np.ndarray:
        """Coefficients against e_j = z^j / ‖z^j‖."""
        return self.coeffs * np.sqrt(self.monomial_norms_sq)

    def evaluate(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return np.polynomial.polynomial.polyval(z, self.coeffs)

    def to_dict(self) -> dict:
        return {'coeffs': [complex(c) for c in self.coeffs], 'hbar': self.hbar}
