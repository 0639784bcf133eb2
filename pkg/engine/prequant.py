"""Prequantization admissibility: integrality, curvature, holonomy and Bohr–Sommerfeld levels."""

import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from sklearn.linear_model import LinearRegression

from models.manifold import HermitianModelMetric, ManifoldKind, ModelManifold
from models.results import HolonomyResult, QuantizabilityReport
from .errors import (
    DegenerateLatticeError,
    OpenLoopError,
    StencilOutOfDomainError,
    UnsupportedManifoldError,
)
from .quadrature import gauss_legendre, periodic_trapezoid

logger = logging.getLogger(__name__)

HermitianForm = Union[float, Callable[[complex, complex], complex]]

COMPACT_KINDS = (
    ManifoldKind.SPHERE,
    ManifoldKind.PRODUCT_SPHERES,
    ManifoldKind.PROJECTIVE_LINE,
    ManifoldKind.TORUS,
)


class QuantizabilityChecker:
    """Integrates ω over compact cycles and tests integrality against 2πℏ."""

    def __init__(
        self,
        tolerance: float = 1e-6,
        polar_nodes: int = 64,
        angular_nodes: int = 64,
        admissible_count: int = 10
    ):
        """
        Initialize checker.

        Args:
            tolerance: Max |ratio − round(ratio)| accepted as integral
            polar_nodes: Gauss–Legendre nodes in the non-periodic chart direction
            angular_nodes: Trapezoid nodes in the periodic direction
            admissible_count: How many admissible parameter values to list (n = 1..count)
        """
        self.tolerance = tolerance
        self.polar_nodes = polar_nodes
        self.angular_nodes = angular_nodes
        self.admissible_count = admissible_count

    # ---- integration -----------------------------------------------------

    def _sphere_integral(self, radius: float, nodes: int) -> float:
        # ω = r sin φ dφ ^ dϑ
        phi, w_phi = gauss_legendre(nodes, 0.0, np.pi)
        _, w_theta = periodic_trapezoid(self.angular_nodes)
        return float(np.sum(radius * np.sin(phi) * w_phi) * np.sum(w_theta))

    def _radial_chart_integral(self, manifold: ModelManifold, nodes: int) -> float:
        # |z|² = u / (1 − u), dx dy = ½ du dϑ / (1 − u)²
        u, w_u = gauss_legendre(nodes, 0.0, 1.0)
        theta, w_theta = periodic_trapezoid(self.angular_nodes)
        uu, tt = np.meshgrid(u, theta, indexing='ij')
        z = np.sqrt(uu / (1.0 - uu)) * np.exp(1j * tt)
        density = manifold.omega_coefficient(z) * 0.5 / (1.0 - uu) ** 2
        return float(np.einsum('i,ij,j->', w_u, density, w_theta))

    def _torus_integral(self, manifold: ModelManifold, nodes: int) -> float:
        lam1, lam2 = manifold.lattice
        s, w = gauss_legendre(nodes, 0.0, 1.0)
        ss, tt = np.meshgrid(s, s, indexing='ij')
        z = ss * lam1 + tt * lam2
        jacobian = abs((np.conj(lam1) * lam2).imag)
        density = manifold.omega_coefficient(z) * jacobian
        return float(np.einsum('i,ij,j->', w, density, w))

    def _integrate(self, manifold: ModelManifold, factor: int, nodes: int) -> float:
        kind = manifold.kind
        if kind == ManifoldKind.SPHERE:
            return self._sphere_integral(manifold.radius, nodes)
        if kind == ManifoldKind.PRODUCT_SPHERES:
            if factor not in (0, 1):
                raise ValueError(f"product of spheres has factors 0 and 1, got {factor}")
            return self._sphere_integral(manifold.r1 if factor == 0 else manifold.r2, nodes)
        if kind == ManifoldKind.PROJECTIVE_LINE:
            return self._radial_chart_integral(manifold, nodes)
        if kind == ManifoldKind.TORUS:
            return self._torus_integral(manifold, nodes)
        raise UnsupportedManifoldError(f"{kind.value} has no designated compact cycle")

    def integrate_with_error(self, manifold: ModelManifold, factor: int = 0) -> Tuple[float, float]:
        """∫ω and a relative error estimate from halving the node count."""
        value = self._integrate(manifold, factor, self.polar_nodes)
        coarse = self._integrate(manifold, factor, max(self.polar_nodes // 2, 2))
        error = abs(value - coarse) / max(abs(value), np.finfo(float).tiny)
        return value, error

    def integrate_symplectic_form(self, manifold: ModelManifold, factor: int = 0) -> float:
        """
        Integrate ω over the model's compact cycle.

        Args:
            manifold: Sphere, ProjectiveLine, Torus or ProductSpheres
            factor: Which sphere of a product (0 or 1)

        Returns:
            ∫ω in action units
        """
        return self.integrate_with_error(manifold, factor)[0]

    def projective_line_degree(self) -> float:
        """(1/π) ∫ (1 + x² + y²)^{-2} dx dy."""
        return self.integrate_symplectic_form(ModelManifold.projective_line()) / np.pi

    # ---- integrality -----------------------------------------------------

    @staticmethod
    def period(manifold: ModelManifold) -> float:
        """Quantum of ∫ω: πℏ on the projective line, 2πℏ elsewhere."""
        if manifold.kind == ManifoldKind.PROJECTIVE_LINE:
            return np.pi * manifold.hbar
        return 2.0 * np.pi * manifold.hbar

    def _is_integral(self, ratio: float) -> bool:
        return abs(ratio - round(ratio)) <= self.tolerance

    def _nearest(self, ratio: float, quantum: float) -> List[float]:
        """Parameter values whose ratio is the integer(s) bracketing ``ratio``."""
        if self._is_integral(ratio):
            candidates = [round(ratio)]
        else:
            candidates = [np.floor(ratio), np.ceil(ratio)]
        return [float(c * quantum) for c in candidates if c >= 1]

    def _admissible_parameter_quantum(self, manifold: ModelManifold) -> Optional[float]:
        kind = manifold.kind
        if kind in (ManifoldKind.SPHERE, ManifoldKind.PRODUCT_SPHERES):
            return manifold.hbar / 2.0
        if kind == ManifoldKind.TORUS:
            lam1, lam2 = manifold.lattice
            return manifold.hbar / abs((np.conj(lam1) * lam2).imag)
        return None

    def check_pc1(self, manifold: ModelManifold) -> QuantizabilityReport:
        """
        Test whether ∫ω over every compact cycle is an integral multiple of the period.

        Args:
            manifold: Compact model (or product of spheres)

        Returns:
            QuantizabilityReport with the ratio and nearest admissible parameters
        """
        period = self.period(manifold)
        factors = [0, 1] if manifold.kind == ManifoldKind.PRODUCT_SPHERES else [0]
        quantum = self._admissible_parameter_quantum(manifold)

        integrals, ratios, errors, nearest = [], [], [], []
        for factor in factors:
            value, error = self.integrate_with_error(manifold, factor)
            ratio = value / period
            integrals.append(value)
            ratios.append(ratio)
            errors.append(error)
            if quantum is not None:
                nearest.extend(self._nearest(ratio, quantum))
            logger.debug("%s factor %d: ∫ω = %.15g, ratio %.15g", manifold.kind.value, factor, value, ratio)

        worst = int(np.argmax([abs(r - round(r)) for r in ratios]))
        return QuantizabilityReport(
            integral_value=integrals[worst],
            ratio=ratios[worst],
            is_integral=all(self._is_integral(r) for r in ratios),
            nearest_admissible_parameters=sorted(set(nearest)),
            factor_ratios=ratios,
            period=period,
            quadrature_error=max(errors)
        )

    def admissible_parameters(self, manifold: ModelManifold) -> List[float]:
        """Parameter values with ratio n for n = 1..admissible_count (e.g. radii nℏ/2)."""
        quantum = self._admissible_parameter_quantum(manifold)
        if quantum is None:
            return []
        return [n * quantum for n in range(1, self.admissible_count + 1)]


def _hermitian(H: HermitianForm) -> Callable[[complex, complex], complex]:
    if callable(H):
        return H
    scale = float(H)
    if scale <= 0:
        raise ValueError(f"hermitian form must be positive, got scale {scale}")
    return lambda z, w: scale * z * np.conj(w)


def lattice_pairing(H: HermitianForm, lattice: Sequence[complex]) -> float:
    """Im H(λ₂, λ₁): the ω-area of the fundamental cell in units of 2π."""
    form = _hermitian(H)
    lam1, lam2 = (complex(g) for g in lattice)
    return float(np.imag(form(lam2, lam1)))


def check_torus_lattice(H: HermitianForm, lattice: Sequence[complex], tolerance: float = 1e-9) -> bool:
    """
    Torus prequantization test: Im H(λᵢ, λⱼ) ∈ Z for all generator pairs.

    Args:
        H: Positive hermitian form, as a scale h (H(z,w) = h z w̄) or a callable
        lattice: Two R-independent complex generators
        tolerance: Distance to the nearest integer accepted

    Returns:
        True iff the torus is quantizable
    """
    form = _hermitian(H)
    generators = [complex(g) for g in lattice]
    if len(generators) != 2 or abs((np.conj(generators[0]) * generators[1]).imag) < 1e-12:
        raise DegenerateLatticeError(f"lattice {generators} does not span C over R")
    for g in generators:
        if not np.real(form(g, g)) > 0:
            raise ValueError(f"H is not positive on generator {g}")

    for a in generators:
        for b in generators:
            value = float(np.imag(form(a, b)))
            if abs(value - round(value)) > tolerance:
                return False
    return True


def _stencil(z: np.ndarray, h: float) -> List[np.ndarray]:
    return [z + h, z - h, z + 1j * h, z - 1j * h]


def _check_stencil(model: ModelManifold, z: np.ndarray, h: float) -> None:
    for shifted in _stencil(z, h):
        if not np.all(model.contains(shifted)):
            raise StencilOutOfDomainError(f"stencil of width {h} leaves the {model.kind.value} domain")


def _five_point_laplacian(f: Callable[[np.ndarray], np.ndarray], z: np.ndarray, h: float) -> np.ndarray:
    return (sum(f(s) for s in _stencil(z, h)) - 4.0 * f(z)) / (h * h)


@dataclass(frozen=True)
class CurvatureGrid:
    """Square grid of chart points, clipped to the disk |z - center| <= radius."""

    radius: float = 0.7
    points_per_axis: int = 20
    center: complex = 0j

    def points(self) -> np.ndarray:
        axis = np.linspace(-self.radius, self.radius, self.points_per_axis)
        xx, yy = np.meshgrid(axis, axis, indexing='ij')
        z = (xx + 1j * yy).ravel()
        keep = np.abs(z) <= self.radius * (1.0 + 1e-12)
        return z[keep] + self.center


class CurvatureProbe:
    """Finite-difference −∂∂̄ log(weight) against each model's curvature constant."""

    def __init__(self, step: float = 1e-3):
        """
        Initialize probe.

        Args:
            step: Central-difference step for the 5-point Laplacian
        """
        self.step = step

    def minus_ddbar_log(self, metric: HermitianModelMetric, z: np.ndarray, step: Optional[float] = None) -> np.ndarray:
        """−∂∂̄ log(weight) = −¼ Δ log(weight) by central differences."""
        h = self.step if step is None else step
        z = np.asarray(z, dtype=complex)
        _check_stencil(metric.model, z, h)
        return -0.25 * _five_point_laplacian(metric.log_weight, z, h)

    def curvature_defect(
        self,
        metric: HermitianModelMetric,
        grid: CurvatureGrid,
        step: Optional[float] = None
    ) -> float:
        """
        Max deviation of −∂∂̄ log(weight) from the model's expected curvature.

        Args:
            metric: Hermitian model metric (carries its own constant)
            grid: Sample points in the model chart
            step: Optional override of the finite-difference step

        Returns:
            Max absolute deviation over the grid
        """
        z = grid.points()
        measured = self.minus_ddbar_log(metric, z, step)
        expected = metric.expected_curvature(z)
        return float(np.max(np.abs(measured - expected)))

    def curvature_convergence(
        self,
        metric: HermitianModelMetric,
        grid: CurvatureGrid,
        steps: Sequence[float] = (0.02, 0.01, 0.005, 0.0025)
    ) -> Tuple[float, List[float]]:
        """Log–log slope of the defect against the stencil step, and the defects."""
        defects = [self.curvature_defect(metric, grid, h) for h in steps]
        x = np.log(np.asarray(steps)).reshape(-1, 1)
        y = np.log(np.asarray(defects))
        slope = float(LinearRegression().fit(x, y).coef_[0])
        logger.debug("curvature defects %s, slope %.3f", defects, slope)
        return slope, defects

    def kahler_defect(
        self,
        manifold: ModelManifold,
        grid: CurvatureGrid,
        step: Optional[float] = None
    ) -> float:
        """
        Max deviation of ½ΔK from the density of ω, i.e. of i∂∂̄K from ω.

        Args:
            manifold: Model with a Kähler potential on one complex chart
            grid: Sample points in the model chart
            step: Optional override of the finite-difference step

        Returns:
            Max absolute deviation over the grid
        """
        h = self.step if step is None else step
        z = grid.points()
        if manifold.kahler_potential(z) is None:
            raise UnsupportedManifoldError(f"no Kähler potential on {manifold.kind.value}")
        _check_stencil(manifold, z, h)
        measured = 0.5 * _five_point_laplacian(manifold.kahler_potential, z, h)
        return float(np.max(np.abs(measured - manifold.omega_coefficient(z))))


def _check_closed(manifold: ModelManifold, loop: np.ndarray, tolerance: float) -> None:
    gap = loop[-1] - loop[0]
    if manifold.kind == ManifoldKind.CYLINDER:
        # angle coordinate closes modulo 2π
        winding = np.round(gap[:manifold.n] / (2 * np.pi))
        gap = gap.copy()
        gap[:manifold.n] -= 2 * np.pi * winding
    scale = max(1.0, float(np.max(np.abs(loop))))
    if np.max(np.abs(gap)) > tolerance * scale:
        raise OpenLoopError(f"loop does not close: end-to-start gap {np.max(np.abs(gap)):.3e}")


def holonomy_loop(manifold: ModelManifold, loop: np.ndarray, closure_tolerance: float = 1e-12) -> HolonomyResult:
    """
    Parallel transport around a closed polyline: action ∮θ and phase e^{i·action/ℏ}.

    Args:
        manifold: Model with θ = Σ p_j dq_j (flat or cylinder)
        loop: Vertices of shape (V, 2n), first vertex repeated last
        closure_tolerance: Relative gap accepted between first and last vertex

    Returns:
        HolonomyResult
    """
    if not manifold.has_darboux_chart:
        raise UnsupportedManifoldError(f"no global potential θ on {manifold.kind.value}")
    loop = np.atleast_2d(np.asarray(loop, dtype=float))
    if loop.shape[1] != manifold.real_dimension:
        raise ValueError(f"loop vertices have {loop.shape[1]} coordinates, expected {manifold.real_dimension}")
    _check_closed(manifold, loop, closure_tolerance)

    n = manifold.n
    q, p = loop[:, :n], loop[:, n:]
    # exact for straight segments: p is linear along each one
    action = float(np.sum(0.5 * (p[1:] + p[:-1]) * np.diff(q, axis=0)))
    phase = complex(np.exp(1j * action / manifold.hbar))
    return HolonomyResult(action=action, phase=phase)


def oscillator_loop(energy: float, vertices: int = 200_000) -> np.ndarray:
    """Energy circle p² + q² = 2E traversed along the oscillator flow."""
    if energy < 0:
        raise ValueError(f"energy must be non-negative, got {energy}")
    t = np.linspace(0.0, 2.0 * np.pi, vertices + 1)
    radius = np.sqrt(2.0 * energy)
    loop = np.column_stack([radius * np.cos(t), -radius * np.sin(t)])
    loop[-1] = loop[0]
    return loop


class OscillatorGeometry:
    """Level sets of ℋ = (p² + q²)/2, where ∮θ = 2πE."""

    action_per_energy = 2.0 * np.pi

    def __init__(self, vertices: int = 200_000):
        self.vertices = vertices

    def action(self, energy: float, hbar: float = 1.0) -> float:
        """∮θ over the energy-E circle, computed as a holonomy."""
        loop = oscillator_loop(energy, self.vertices)
        return holonomy_loop(ModelManifold.flat(hbar=hbar), loop).action

    def energy_for_action(self, action: float) -> float:
        """Energy of the level circle enclosing ∮θ = action."""
        return action / self.action_per_energy


def bohr_sommerfeld_levels(
    d: float,
    n_max: int,
    level_geometry: Optional[OscillatorGeometry] = None,
    hbar: float = 1.0
) -> List[float]:
    """
    Energies E_n with ∮θ = 2πℏ(n + d), n = 0..n_max.

    Args:
        d: Holonomy shift in [0, 1) (½ with the half-form correction)
        n_max: Highest level
        level_geometry: Geometry relating ∮θ to E (oscillator by default)
        hbar: Planck constant

    Returns:
        List of n_max + 1 energies
    """
    if not 0.0 <= d < 1.0:
        raise ValueError(f"holonomy shift must lie in [0, 1), got {d}")
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    geometry = level_geometry or OscillatorGeometry()
    return [geometry.energy_for_action(2.0 * np.pi * hbar * (n + d)) for n in range(n_max + 1)]


def cylinder_loop(momentum: float, vertices: int = 64) -> np.ndarray:
    """Loop p = const winding once around the cylinder."""
    phi = np.linspace(0.0, 2.0 * np.pi, vertices + 1)
    return np.column_stack([phi, np.full_like(phi, momentum)])


def cylinder_momentum_levels(n_max: int, hbar: float = 1.0) -> List[float]:
    """Momenta p_n = nℏ, |n| <= n_max, for which ∮ p dφ = 2πℏn."""
    return [hbar * n for n in range(-n_max, n_max + 1)]
