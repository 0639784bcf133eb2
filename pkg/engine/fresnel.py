"""Fresnel integrals with Maslov phases and the Schrödinger generator from the time-evolution pairing."""

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
import sympy as sp

from models.results import Amplitude, FresnelSpec, GeneratorCheck, MaslovPhase
from .errors import TailMassError
from .quadrature import richardson

logger = logging.getLogger(__name__)


def fresnel_gaussian(spec: FresnelSpec) -> Tuple[MaslovPhase, complex]:
    """
    ∫_{R^n} e^{(i/2) a |p|²} dp = (2π)^{n/2} a^{-n/2} e^{inπ/4}.

    Args:
        spec: Plain-amplitude spec

    Returns:
        (phase with c = n, complex value)
    """
    if spec.amplitude != Amplitude.ONE:
        raise ValueError("fresnel_gaussian takes the plain amplitude; use fresnel_quadratic")
    phase = MaslovPhase(c=spec.n, magnitude=(2.0 * np.pi / spec.a) ** (spec.n / 2.0))
    return phase, phase.value


def fresnel_quadratic_phase(spec: FresnelSpec) -> MaslovPhase:
    """Phase of the p_j² amplitude: c = c̃ + 1 over the (n−1)-dimensional plain factor."""
    c_tilde = spec.n - 1
    magnitude = (2.0 * np.pi / spec.a) ** (spec.n / 2.0) / spec.a
    return MaslovPhase(c=c_tilde + 1, magnitude=magnitude)


def fresnel_quadratic(spec: FresnelSpec) -> complex:
    """
    ∫ p_j p_l e^{(i/2) a |p|²} dp.

    Zero for j ≠ l by parity. For j = l the value is the one-dimensional
    quadratic factor i √(2π) e^{iπ/4} a^{-3/2} times the (n−1)-dimensional
    plain integral, i.e. i · magnitude · e^{icπ/4} with c = n.

    Args:
        spec: Spec with the p_j p_l amplitude

    Returns:
        Complex value
    """
    if spec.amplitude != Amplitude.QUADRATIC:
        raise ValueError("fresnel_quadratic takes the p_j p_l amplitude")
    if spec.j != spec.l:
        return 0j
    return 1j * fresnel_quadratic_phase(spec).value


class FresnelOracle:
    """Damped quadrature e^{-ε p²} with Richardson extrapolation ε → 0."""

    def __init__(
        self,
        eps_factor: float = 0.005,
        levels: int = 3,
        cutoff_exponent: float = 40.0,
        points_per_oscillation: float = 8.0
    ):
        """
        Initialize oracle.

        Args:
            eps_factor: First damping ε₀ = eps_factor · a, halved at each level
            levels: Number of ε levels combined by Richardson extrapolation
            cutoff_exponent: Grid extends to p_max = √(cutoff_exponent / ε)
            points_per_oscillation: Grid points per local period at p_max
        """
        self.eps_factor = eps_factor
        self.levels = levels
        self.cutoff_exponent = cutoff_exponent
        self.points_per_oscillation = points_per_oscillation

    def damped(self, a: float, eps: float, power: int = 0) -> complex:
        """∫ p^power e^{(ia/2 − ε) p²} dp by the trapezoid rule on a symmetric grid."""
        p_max = np.sqrt(self.cutoff_exponent / eps)
        period = 2.0 * np.pi / (a * p_max)
        count = int(np.ceil(2.0 * p_max / period * self.points_per_oscillation)) | 1
        p = np.linspace(-p_max, p_max, count)
        step = p[1] - p[0]
        integrand = p ** power * np.exp((0.5j * a - eps) * p * p)
        return complex(np.sum(integrand) * step)

    def one_dimensional(self, a: float, power: int = 0) -> complex:
        eps = [self.eps_factor * a / 2 ** k for k in range(self.levels)]
        values = [self.damped(a, e, power) for e in eps]
        logger.debug("damped values a=%g power=%d: %s", a, power, values)
        return complex(richardson(values))

    def evaluate(self, spec: FresnelSpec) -> complex:
        """Oracle value of the spec's integral, built from one-dimensional factors."""
        plain = self.one_dimensional(spec.a)
        if spec.amplitude == Amplitude.ONE:
            return plain ** spec.n
        if spec.j == spec.l:
            return self.one_dimensional(spec.a, 2) * plain ** (spec.n - 1)
        odd = self.one_dimensional(spec.a, 1)
        return odd * odd * plain ** (spec.n - 2)


def regularized_fresnel(spec: FresnelSpec, oracle: Optional[FresnelOracle] = None) -> complex:
    return (oracle or FresnelOracle()).evaluate(spec)


def linear_term_contribution(a: float, oracle: Optional[FresnelOracle] = None) -> complex:
    """Oracle value of ∫ p e^{(i/2) a p²} dp, zero by parity."""
    return (oracle or FresnelOracle()).one_dimensional(a, 1)


@dataclass(frozen=True)
class ProbeState:
    """Smooth test wave function ψ(q) given as a sympy expression in q."""

    expr: sp.Expr
    sigma: float = 1.0
    label: str = "state"

    @property
    def symbol(self) -> sp.Symbol:
        return sp.Symbol('q', real=True)

    def _function(self, expr: sp.Expr) -> Callable[[np.ndarray], np.ndarray]:
        func = sp.lambdify(self.symbol, expr, modules='numpy')
        return lambda x: np.broadcast_to(np.asarray(func(x), dtype=complex), np.shape(x))

    def conjugate(self) -> Callable[[np.ndarray], np.ndarray]:
        return self._function(sp.conjugate(self.expr))

    def conjugate_second_derivative(self) -> Callable[[np.ndarray], np.ndarray]:
        return self._function(sp.diff(sp.conjugate(self.expr), self.symbol, 2))

    @classmethod
    def standard_gaussian(cls) -> "ProbeState":
        q = sp.Symbol('q', real=True)
        return cls(sp.exp(-q ** 2 / 2) / sp.sqrt(2 * sp.pi), 1.0, "standard-gaussian")

    @classmethod
    def displaced_gaussian(cls, shift: float = 0.5) -> "ProbeState":
        q = sp.Symbol('q', real=True)
        return cls(sp.exp(-(q - sp.nsimplify(shift)) ** 2 / 2) / sp.sqrt(2 * sp.pi), 1.0, "displaced-gaussian")

    @classmethod
    def plane_wave_gaussian(cls, k: float = 2.0) -> "ProbeState":
        q = sp.Symbol('q', real=True)
        return cls(sp.exp(sp.I * sp.nsimplify(k) * q) * sp.exp(-q ** 2 / 2), 1.0, "plane-wave-gaussian")

    @classmethod
    def flat_top(cls, width: float = 3.0) -> "ProbeState":
        """Nearly constant core, e^{-(q/width)^8}."""
        q = sp.Symbol('q', real=True)
        return cls(sp.exp(-(q / sp.nsimplify(width)) ** 8), width / 4.0, "flat-top")


class SchrodingerPairing:
    """
    Time-evolution pairing I_t(q) = √(m/2πℏt) ∫ ψ̄(x) e^{im(x−q)²/(2ℏt)} dx.

    Expanding in t gives I_t = e^{iπ/4}(ψ̄ + t (iℏ/2m) ψ̄'' + O(t²)), the
    conjugated free Schrödinger generator.
    """

    def __init__(
        self,
        grid_points: int = 4096,
        half_width_sigmas: float = 8.0,
        interior_fraction: float = 0.5,
        sample_stride: int = 8,
        tail_tolerance: float = 1e-10,
        mass: float = 1.0,
        hbar: float = 1.0
    ):
        """
        Initialize pairing.

        Args:
            grid_points: Uniform quadrature points
            half_width_sigmas: Grid half-width in units of the state's σ
            interior_fraction: Residual sampled where |q| <= fraction · half-width
            sample_stride: Keep every stride-th grid point as an evaluation point
            tail_tolerance: Largest |ψ|² mass fraction allowed in the outer eighth of the grid
            mass: Particle mass
            hbar: Planck constant
        """
        self.grid_points = grid_points
        self.half_width_sigmas = half_width_sigmas
        self.interior_fraction = interior_fraction
        self.sample_stride = sample_stride
        self.tail_tolerance = tail_tolerance
        self.mass = mass
        self.hbar = hbar
        self.phase = MaslovPhase(c=1, magnitude=1.0)

    def with_units(self, hbar: Optional[float] = None, mass: Optional[float] = None) -> "SchrodingerPairing":
        """Same grid settings with another ℏ or m."""
        return SchrodingerPairing(
            grid_points=self.grid_points,
            half_width_sigmas=self.half_width_sigmas,
            interior_fraction=self.interior_fraction,
            sample_stride=self.sample_stride,
            tail_tolerance=self.tail_tolerance,
            mass=self.mass if mass is None else mass,
            hbar=self.hbar if hbar is None else hbar
        )

    def grid(self, state: ProbeState) -> np.ndarray:
        half_width = self.half_width_sigmas * state.sigma
        return np.linspace(-half_width, half_width, self.grid_points)

    def samples(self, state: ProbeState) -> np.ndarray:
        x = self.grid(state)
        limit = self.interior_fraction * x[-1]
        return x[np.abs(x) <= limit][::self.sample_stride]

    def _check_tail(self, state: ProbeState, x: np.ndarray, values: np.ndarray) -> None:
        density = np.abs(values) ** 2
        outer = np.abs(x) > 0.875 * x[-1]
        total = float(np.sum(density))
        tail = float(np.sum(density[outer])) / total if total > 0 else 0.0
        if tail >= self.tail_tolerance:
            raise TailMassError(f"{state.label}: tail mass {tail:.3e} on the grid edge >= {self.tail_tolerance:.1e}")

    def evolve(self, state: ProbeState, t: float, q: Optional[np.ndarray] = None) -> np.ndarray:
        """I_t(q) with the unit phase e^{iπ/4} divided out."""
        if not 0.0 < t <= 0.1:
            raise ValueError(f"t must lie in (0, 0.1], got {t}")
        x = self.grid(state)
        step = x[1] - x[0]
        values = state.conjugate()(x)
        self._check_tail(state, x, values)

        q = self.samples(state) if q is None else np.asarray(q, dtype=float)
        alpha = self.mass / (2.0 * self.hbar * t)
        prefactor = np.sqrt(self.mass / (2.0 * np.pi * self.hbar * t))
        chirp = np.exp(1j * alpha * (x[None, :] - q[:, None]) ** 2)
        integral = prefactor * (chirp @ values) * step
        return integral / self.phase.unit

    def difference_quotient(self, state: ProbeState, t: float, q: Optional[np.ndarray] = None) -> np.ndarray:
        q = self.samples(state) if q is None else q
        return (self.evolve(state, t, q) - state.conjugate()(q)) / t

    def expected_first_order(self, state: ProbeState, q: np.ndarray) -> np.ndarray:
        """(iℏ/2m) ψ̄'', i.e. −(i/ℏ)ℋ acting on ψ̄ with conjugated sign."""
        return 1j * self.hbar / (2.0 * self.mass) * state.conjugate_second_derivative()(q)

    def schrodinger_generator_check(self, state: ProbeState, t: float) -> GeneratorCheck:
        """
        Compare the first-order term of the pairing with the Schrödinger generator.

        Args:
            state: Test wave function
            t: Small time in (0, 0.1]

        Returns:
            GeneratorCheck with the max-norm residual on interior samples
        """
        q = self.samples(state)
        first_order = self.difference_quotient(state, t, q)
        expected = self.expected_first_order(state, q)
        residual = float(np.max(np.abs(first_order - expected)))

        # zeroth order: I_t / ψ̄ at the peak, before the phase is divided out
        conj = state.conjugate()(q)
        peak = int(np.argmax(np.abs(conj)))
        zeroth = complex(self.evolve(state, t, q[peak:peak + 1])[0] / conj[peak] * self.phase.unit)

        logger.debug("%s t=%g residual %.3e", state.label, t, residual)
        return GeneratorCheck(
            zeroth=zeroth,
            first_order=first_order,
            expected_first_order=expected,
            residual=residual,
            grid=q,
            phase=self.phase
        )

    def first_order_coefficient(self, state: ProbeState, t: float) -> Tuple[np.ndarray, np.ndarray]:
        """
        Two Richardson levels of the difference quotient D, and the sample points.

        D(h) = a + b h + c h² + O(h³), so (8D(h/2) − 6D(h) + D(2h))/3 = a + O(h³).
        The ladder is (2t, t, t/2), or (t, t/2, t/4) when 2t leaves (0, 0.1].
        """
        q = self.samples(state)
        h = t if 2.0 * t <= 0.1 else t / 2.0
        coarse = self.difference_quotient(state, 2.0 * h, q)
        middle = self.difference_quotient(state, h, q)
        fine = self.difference_quotient(state, h / 2.0, q)
        return (8.0 * fine - 6.0 * middle + coarse) / 3.0, q

    def first_order_relative_error(self, state: ProbeState, t: float) -> float:
        coefficient, q = self.first_order_coefficient(state, t)
        expected = self.expected_first_order(state, q)
        scale = float(np.max(np.abs(expected)))
        return float(np.max(np.abs(coefficient - expected))) / max(scale, np.finfo(float).tiny)

    def generator_convergence(self, state: ProbeState, times: Sequence[float] = (0.08, 0.04, 0.02, 0.01)) -> pd.DataFrame:
        """Residual against t, one row per time."""
        rows = [{'t': t, 'residual': self.schrodinger_generator_check(state, t).residual} for t in times]
        return pd.DataFrame(rows, columns=['t', 'residual'])


def residual_halving_ratio(table: pd.DataFrame) -> float:
    """Mean ratio residual(t) / residual(t/2) over consecutive rows of a convergence table."""
    ordered = table.sort_values('t', ascending=False)
    residuals = ordered['residual'].to_numpy()
    return float(np.mean(residuals[:-1] / residuals[1:]))


def hbar_scaling_defect(pairing: SchrodingerPairing, state: ProbeState, hbar: float, t: float) -> Tuple[float, float]:
    """
    Relative defect of D_ℏ(s) = (ℏ/ℏ₀) D_ℏ₀(sℏ/ℏ₀), where ℏ₀ is the pairing's own ℏ.

    The pairing depends on ℏ and t only through ℏt/m, so the identity holds to
    rounding. ``s`` is ``t`` shrunk until both times stay in (0, 0.1].

    Returns:
        (defect, s)
    """
    if not hbar > 0:
        raise ValueError(f"hbar must be positive, got {hbar}")
    ratio = hbar / pairing.hbar
    s = min(t, 0.05 / ratio)
    q = pairing.samples(state)
    scaled = pairing.with_units(hbar=hbar).difference_quotient(state, s, q)
    reference = ratio * pairing.difference_quotient(state, s * ratio, q)
    scale = float(np.max(np.abs(scaled)))
    defect = float(np.max(np.abs(scaled - reference))) / max(scale, np.finfo(float).tiny)
    logger.debug("hbar %g: scaling defect %.3e at s=%g", hbar, defect, s)
    return defect, s
