"""Model phase spaces, points, complex structures and hermitian weights."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

import numpy as np


class ManifoldKind(str, Enum):
    """Model phase spaces the engine knows how to handle."""

    FLAT_COMPLEX = "flat"
    PROJECTIVE_LINE = "projective-line"
    DISK = "disk"
    TORUS = "torus"
    SPHERE = "sphere"
    PRODUCT_SPHERES = "product-spheres"
    CYLINDER = "cylinder"


# Kinds with a global Darboux chart (q, p).
DARBOUX_KINDS = (ManifoldKind.FLAT_COMPLEX, ManifoldKind.CYLINDER)


def symplectic_matrix(n: int) -> np.ndarray:
    """Matrix of sum dq_j ^ dp_j in (q_1..q_n, p_1..p_n) ordering."""
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


@dataclass(frozen=True)
class ModelManifold:
    """A model Kähler (or symplectic) phase space.

    Only the parameters relevant to ``kind`` are set; the factory
    classmethods are the intended constructors.
    """

    kind: ManifoldKind
    n: int = 1
    hbar: float = 1.0

    # Sphere / product of spheres
    radius: Optional[float] = None
    r1: Optional[float] = None
    r2: Optional[float] = None

    # Torus: H(z, w) = hermitian_scale * z * conj(w), lattice generators
    hermitian_scale: Optional[float] = None
    lattice: Optional[Tuple[complex, complex]] = None

    def __post_init__(self):
        if self.hbar <= 0 or not np.isfinite(self.hbar):
            raise ValueError(f"hbar must be positive, got {self.hbar}")
        if self.n < 1:
            raise ValueError(f"dimension must be >= 1, got {self.n}")
        if self.kind == ManifoldKind.SPHERE:
            if self.radius is None or self.radius <= 0:
                raise ValueError(f"sphere radius must be positive, got {self.radius}")
        if self.kind == ManifoldKind.PRODUCT_SPHERES:
            for name, value in (("r1", self.r1), ("r2", self.r2)):
                if value is None or value <= 0:
                    raise ValueError(f"{name} must be positive, got {value}")
        if self.kind == ManifoldKind.TORUS:
            if self.hermitian_scale is None or self.hermitian_scale <= 0:
                raise ValueError(f"H must be positive, got scale {self.hermitian_scale}")
            if self.lattice is None or len(self.lattice) != 2:
                raise ValueError("torus needs exactly two lattice generators")
            lam1, lam2 = (complex(g) for g in self.lattice)
            if abs((lam1.conjugate() * lam2).imag) < 1e-12:
                raise ValueError(f"lattice generators {lam1}, {lam2} are R-linearly dependent")

    # ---- factories -------------------------------------------------------

    @classmethod
    def flat(cls, n: int = 1, hbar: float = 1.0) -> "ModelManifold":
        return cls(ManifoldKind.FLAT_COMPLEX, n=n, hbar=hbar)

    @classmethod
    def projective_line(cls, hbar: float = 1.0) -> "ModelManifold":
        return cls(ManifoldKind.PROJECTIVE_LINE, hbar=hbar)

    @classmethod
    def disk(cls, hbar: float = 1.0) -> "ModelManifold":
        return cls(ManifoldKind.DISK, hbar=hbar)

    @classmethod
    def torus(
        cls,
        hermitian_scale: float = 1.0,
        lattice: Tuple[complex, complex] = (1.0, 1j),
        hbar: float = 1.0
    ) -> "ModelManifold":
        return cls(
            ManifoldKind.TORUS,
            hbar=hbar,
            hermitian_scale=hermitian_scale,
            lattice=(complex(lattice[0]), complex(lattice[1]))
        )

    @classmethod
    def sphere(cls, radius: float, hbar: float = 1.0) -> "ModelManifold":
        return cls(ManifoldKind.SPHERE, hbar=hbar, radius=radius)

    @classmethod
    def product_spheres(cls, r1: float, r2: float, hbar: float = 1.0) -> "ModelManifold":
        return cls(ManifoldKind.PRODUCT_SPHERES, n=2, hbar=hbar, r1=r1, r2=r2)

    @classmethod
    def cylinder(cls, hbar: float = 1.0) -> "ModelManifold":
        return cls(ManifoldKind.CYLINDER, hbar=hbar)

    # ---- geometry --------------------------------------------------------

    @property
    def has_darboux_chart(self) -> bool:
        return self.kind in DARBOUX_KINDS

    @property
    def real_dimension(self) -> int:
        return 2 * self.n

    def symplectic_matrix(self) -> np.ndarray:
        """Constant matrix of ω in the Darboux chart."""
        return symplectic_matrix(self.n)

    def omega_coefficient(self, z) -> np.ndarray:
        """Density of ω with respect to dx^dy in the complex chart z = x + iy."""
        z = np.asarray(z, dtype=complex)
        r2 = np.abs(z) ** 2
        if self.kind == ManifoldKind.FLAT_COMPLEX:
            return np.ones_like(r2)
        if self.kind == ManifoldKind.DISK:
            return (2.0 / np.pi) / (1.0 - r2) ** 2
        if self.kind == ManifoldKind.TORUS:
            return np.full_like(r2, 2.0 * np.pi * self.hermitian_scale)
        if self.kind == ManifoldKind.PROJECTIVE_LINE:
            return 1.0 / (1.0 + r2) ** 2
        if self.kind == ManifoldKind.SPHERE:
            # stereographic chart
            return 4.0 * self.radius / (1.0 + r2) ** 2
        raise ValueError(f"{self.kind.value} has no single complex chart")

    def kahler_potential(self, z) -> Optional[np.ndarray]:
        """Kähler potential K with ω = i∂∂̄K, or None where none is defined."""
        z = np.asarray(z, dtype=complex)
        r2 = np.abs(z) ** 2
        if self.kind == ManifoldKind.FLAT_COMPLEX:
            return r2 / 2.0
        if self.kind == ManifoldKind.DISK:
            return -np.log(1.0 - r2) / np.pi
        if self.kind == ManifoldKind.TORUS:
            return np.pi * self.hermitian_scale * r2
        if self.kind == ManifoldKind.PROJECTIVE_LINE:
            return 0.5 * np.log1p(r2)
        if self.kind == ManifoldKind.SPHERE:
            return 2.0 * self.radius * np.log1p(r2)
        return None

    def symplectic_potential(self, coords: np.ndarray) -> Optional[np.ndarray]:
        """Components of θ = Σ p_j dq_j at a Darboux point (dq then dp slots)."""
        if not self.has_darboux_chart:
            return None
        coords = np.asarray(coords, dtype=float)
        theta = np.zeros_like(coords)
        theta[..., :self.n] = coords[..., self.n:]
        return theta

    def contains(self, z) -> np.ndarray:
        """Whether chart points z belong to the model's domain."""
        z = np.asarray(z, dtype=complex)
        if self.kind == ManifoldKind.DISK:
            return np.abs(z) < 1.0
        return np.isfinite(z)

    def to_dict(self) -> dict:
        return {
            'kind': self.kind.value,
            'n': self.n,
            'hbar': self.hbar,
            'radius': self.radius,
            'r1': self.r1,
            'r2': self.r2,
            'hermitian_scale': self.hermitian_scale,
            'lattice': [str(g) for g in self.lattice] if self.lattice else None,
        }


@dataclass(frozen=True, eq=False)
class PhasePoint:
    """A point in Darboux coordinates (q_1..q_n, p_1..p_n)."""

    coords: np.ndarray

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=float).reshape(-1)
        if coords.size % 2 != 0:
            raise ValueError(f"phase point needs an even number of coordinates, got {coords.size}")
        if not np.all(np.isfinite(coords)):
            raise ValueError(f"phase point has non-finite entries: {coords}")
        object.__setattr__(self, 'coords', coords)

    @classmethod
    def from_qp(cls, q, p) -> "PhasePoint":
        return cls(np.concatenate([np.atleast_1d(q), np.atleast_1d(p)]).astype(float))

    @classmethod
    def from_complex(cls, z) -> "PhasePoint":
        """Build from z = p + iq."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        return cls.from_qp(z.imag, z.real)

    @property
    def n(self) -> int:
        return self.coords.size // 2

    @property
    def q(self) -> np.ndarray:
        return self.coords[:self.n]

    @property
    def p(self) -> np.ndarray:
        return self.coords[self.n:]

    @property
    def z(self) -> np.ndarray:
        return self.p + 1j * self.q

    def validate_on(self, manifold: ModelManifold) -> None:
        if self.n != manifold.n:
            raise ValueError(f"point has dimension {self.n}, manifold has {manifold.n}")
        if manifold.kind == ManifoldKind.DISK and np.any(np.abs(self.z) >= 1.0):
            raise ValueError(f"point {self.z} lies outside the unit disk")

    def to_dict(self) -> dict:
        return {'q': self.q.tolist(), 'p': self.p.tolist()}


def kahler_form_matrix(n: int = 1) -> np.ndarray:
    """ω = Σ dx_j ^ dy_j on (x_1..x_n, y_1..y_n), x + iy = z."""
    return symplectic_matrix(n)


@dataclass(frozen=True, eq=False)
class ComplexStructure:
    """Linear complex structure J on R^2n compatible with the Kähler form."""

    J: np.ndarray
    tolerance: float = 1e-10

    def __post_init__(self):
        J = np.asarray(self.J, dtype=float)
        if J.ndim != 2 or J.shape[0] != J.shape[1] or J.shape[0] % 2 != 0:
            raise ValueError(f"J must be a square 2n x 2n matrix, got shape {J.shape}")
        object.__setattr__(self, 'J', J)
        dim = J.shape[0]
        omega = kahler_form_matrix(dim // 2)
        if np.max(np.abs(J @ J + np.eye(dim))) > self.tolerance:
            raise ValueError("J^2 != -Id")
        if np.max(np.abs(J.T @ omega @ J - omega)) > self.tolerance:
            raise ValueError("J does not preserve ω")
        metric = self.metric()
        if np.max(np.abs(metric - metric.T)) > self.tolerance:
            raise ValueError("ω(., J.) is not symmetric")
        if np.min(np.linalg.eigvalsh(metric)) <= 0:
            raise ValueError("ω(v, Jv) is not positive definite")

    @classmethod
    def standard(cls, n: int = 1) -> "ComplexStructure":
        """Multiplication by i on z = x + iy."""
        eye = np.eye(n)
        zero = np.zeros((n, n))
        return cls(np.block([[zero, -eye], [eye, zero]]))

    @property
    def n(self) -> int:
        return self.J.shape[0] // 2

    def metric(self) -> np.ndarray:
        """Matrix G of g(v, w) = ω(v, Jw)."""
        return kahler_form_matrix(self.n) @ self.J

    def to_dict(self) -> dict:
        return {'J': self.J.tolist()}


@dataclass(frozen=True)
class HermitianModelMetric:
    """Hermitian weight ‖s‖² of the distinguished section of a model line bundle.

    ``curvature_ratio`` is the model's own constant between −∂∂̄ log(weight)
    and the density of ω; ``power`` is the tensor power (projective line).
    """

    model: ModelManifold
    power: int = 1
    curvature_ratio: float = field(default=None)

    def __post_init__(self):
        if self.power < 1:
            raise ValueError(f"tensor power must be >= 1, got {self.power}")
        if self.curvature_ratio is None:
            object.__setattr__(self, 'curvature_ratio', self._default_ratio())

    def _default_ratio(self) -> float:
        kind = self.model.kind
        if kind in (ManifoldKind.FLAT_COMPLEX, ManifoldKind.TORUS):
            return 1.0 / (2.0 * self.model.hbar)
        if kind == ManifoldKind.DISK:
            return np.pi
        if kind == ManifoldKind.PROJECTIVE_LINE:
            return float(self.power)
        raise ValueError(f"no hermitian model metric for {kind.value}")

    @classmethod
    def for_model(cls, model: ModelManifold, power: int = 1) -> "HermitianModelMetric":
        return cls(model=model, power=power)

    def log_weight(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        r2 = np.abs(z) ** 2
        kind = self.model.kind
        if kind == ManifoldKind.FLAT_COMPLEX:
            return -r2 / (2.0 * self.model.hbar)
        if kind == ManifoldKind.DISK:
            return 2.0 * np.log(1.0 - r2)
        if kind == ManifoldKind.TORUS:
            return -np.pi * self.model.hermitian_scale * r2 / self.model.hbar
        if kind == ManifoldKind.PROJECTIVE_LINE:
            return -self.power * np.log1p(r2)
        raise ValueError(f"no hermitian model metric for {kind.value}")

    def weight(self, z) -> np.ndarray:
        return np.exp(self.log_weight(z))

    def expected_curvature(self, z) -> np.ndarray:
        """Value −∂∂̄ log(weight) must take at z."""
        return self.curvature_ratio * self.model.omega_coefficient(z)

    def to_dict(self) -> dict:
        return {
            'model': self.model.kind.value,
            'power': self.power,
            'curvature_ratio': self.curvature_ratio,
        }
