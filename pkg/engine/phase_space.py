"""Classical kinematics on model phase spaces.

Conventions: coordinates (q_1..q_n, p_1..p_n), ω = Σ dq_j ^ dp_j,
X_f = Σ ∂f/∂p_j ∂_{q_j} − ∂f/∂q_j ∂_{p_j}. With these, df = X_f ⌟ ω and
{f, g} = ω(X_f, X_g) = X_g(f), so {q, p} = 1. The potential θ = Σ p_j dq_j
satisfies dθ = −ω.
"""

import logging
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import sympy as sp

from models.manifold import ModelManifold, PhasePoint, symplectic_matrix
from models.observable import Observable
from models.results import GeneratingAction
from .errors import DimensionMismatchError, FlowBlowupError, UnsupportedManifoldError

logger = logging.getLogger(__name__)


def _require_darboux(manifold: ModelManifold) -> None:
    if not manifold.has_darboux_chart:
        raise UnsupportedManifoldError(
            f"{manifold.kind.value} exposes no global Darboux chart"
        )


def _require_same_dimension(manifold: ModelManifold, f: Observable) -> None:
    if f.n != manifold.n:
        raise DimensionMismatchError(
            f"observable on R^{2 * f.n}, manifold of real dimension {manifold.real_dimension}"
        )


def _as_point(m) -> PhasePoint:
    return m if isinstance(m, PhasePoint) else PhasePoint(np.asarray(m, dtype=float))


def gradient(f: Observable, coords: np.ndarray) -> np.ndarray:
    """(∂f/∂q_1..∂f/∂q_n, ∂f/∂p_1..∂f/∂p_n) at coords of shape (..., 2n)."""
    coords = np.asarray(coords, dtype=float)
    parts = [f.diff_q(j).lambdify()(coords) for j in range(f.n)]
    parts += [f.diff_p(j).lambdify()(coords) for j in range(f.n)]
    return np.stack(parts, axis=-1)


def symplectic_pairing(v: np.ndarray, w: np.ndarray) -> complex:
    """ω(v, w) = vᵀ Ω w."""
    v = np.asarray(v)
    w = np.asarray(w)
    omega = symplectic_matrix(v.shape[-1] // 2)
    return np.einsum('...i,ij,...j->...', v, omega, w)


def hamiltonian_vector_field(manifold: ModelManifold, f: Observable, m) -> np.ndarray:
    """Solve df = X_f ⌟ ω at m.

    Args:
        manifold: Model with a global Darboux chart
        f: Polynomial observable
        m: PhasePoint or raw coordinate vector

    Returns:
        X_f(m) as a 2n-vector (real when f is real)
    """
    _require_darboux(manifold)
    _require_same_dimension(manifold, f)
    point = _as_point(m)
    point.validate_on(manifold)

    grad = gradient(f, point.coords)
    # X ⌟ ω = Ωᵀ X as a covector
    field = np.linalg.solve(manifold.symplectic_matrix().T, grad)
    if f.is_real():
        return np.real(field)
    return field


def poisson_bracket(f: Observable, g: Observable) -> Observable:
    """Exact {f, g} = Σ ∂f/∂q_j ∂g/∂p_j − ∂f/∂p_j ∂g/∂q_j."""
    if f.n != g.n:
        raise DimensionMismatchError(f"bracket of observables on R^{2 * f.n} and R^{2 * g.n}")
    total = sp.Poly(0, *f.generators)
    for q, p in zip(f.q_symbols, f.p_symbols):
        total = total + f.poly.diff(q) * g.poly.diff(p) - f.poly.diff(p) * g.poly.diff(q)
    return Observable(total, n=f.n)


def lagrangian_of(f: Observable, manifold: Optional[ModelManifold] = None) -> Observable:
    """ℒ = X_f ⌟ θ − f with θ = Σ p_j dq_j, i.e. Σ p_j ∂f/∂p_j − f."""
    if manifold is not None:
        _require_darboux(manifold)
        _require_same_dimension(manifold, f)
    total = sp.Poly(0, *f.generators)
    for p in f.p_symbols:
        total = total + sp.Poly(p, *f.generators) * f.poly.diff(p)
    return Observable(total - f.poly, n=f.n)


def moment_map_s1(weights: Sequence[int], m) -> float:
    """Φ = −½ Σ m_i (x_i² + y_i²) for the circle action with integer weights."""
    point = _as_point(m)
    weights = np.asarray(weights, dtype=float)
    if weights.size != point.n:
        raise DimensionMismatchError(f"{weights.size} weights for a point of dimension {point.n}")
    return float(-0.5 * np.sum(weights * (point.q ** 2 + point.p ** 2)))


def circle_generator(weights: Sequence[int], m) -> np.ndarray:
    """Infinitesimal generator ξ_M = Σ m_i (−y_i ∂_{x_i} + x_i ∂_{y_i})."""
    point = _as_point(m)
    weights = np.asarray(weights, dtype=float)
    return np.concatenate([-weights * point.p, weights * point.q])


def moment_map_defect(weights: Sequence[int], m, step: float = 1e-5) -> float:
    """Max |dΦ − ξ_M ⌟ ω| at m, dΦ by central differences."""
    point = _as_point(m)
    coords = point.coords
    dphi = np.zeros_like(coords)
    for k in range(coords.size):
        shift = np.zeros_like(coords)
        shift[k] = step
        dphi[k] = (moment_map_s1(weights, coords + shift) - moment_map_s1(weights, coords - shift)) / (2 * step)
    xi = circle_generator(weights, point)
    contraction = symplectic_matrix(point.n).T @ xi
    return float(np.max(np.abs(dphi - contraction)))


class HamiltonianFlow:
    """Fixed-step RK4 integration of Hamiltonian flows and their generating action."""

    def __init__(
        self,
        steps: int = 1024,
        min_steps: int = 16,
        blowup_bound: float = 1e6
    ):
        """
        Initialize flow integrator.

        Args:
            steps: Default number of RK4 steps
            min_steps: Smallest step count accepted
            blowup_bound: Max trajectory norm before the flow is declared blown up
        """
        self.steps = steps
        self.min_steps = min_steps
        self.blowup_bound = blowup_bound

    def _rhs(self, f: Observable) -> Callable[[np.ndarray], np.ndarray]:
        """Right-hand side for the augmented state (q, p, S, A).

        dS/dt = −ℒ, dA/dt = |ℒ| (action scale used for the relative error).
        """
        if not f.is_real():
            raise ValueError(f"flow requires a real observable, got {f}")
        n = f.n
        df_dq = [f.diff_q(j).lambdify() for j in range(n)]
        df_dp = [f.diff_p(j).lambdify() for j in range(n)]
        lagrangian = lagrangian_of(f).lambdify()

        def rhs(state: np.ndarray) -> np.ndarray:
            coords = state[:2 * n]
            out = np.empty_like(state)
            out[:n] = [np.real(g(coords)) for g in df_dp]
            out[n:2 * n] = [-np.real(g(coords)) for g in df_dq]
            lag = float(np.real(lagrangian(coords)))
            out[2 * n] = -lag
            out[2 * n + 1] = abs(lag)
            return out

        return rhs

    def _integrate(self, f: Observable, start: np.ndarray, t: float, steps: int) -> np.ndarray:
        """Return the augmented state at every step, shape (steps + 1, 2n + 2)."""
        rhs = self._rhs(f)
        dt = t / steps
        states = np.empty((steps + 1, start.size + 2))
        states[0] = np.concatenate([start, [0.0, 0.0]])
        y = states[0].copy()
        n2 = start.size
        for i in range(steps):
            k1 = rhs(y)
            k2 = rhs(y + 0.5 * dt * k1)
            k3 = rhs(y + 0.5 * dt * k2)
            k4 = rhs(y + dt * k3)
            y = y + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            norm = np.linalg.norm(y[:n2])
            if not np.isfinite(norm) or norm > self.blowup_bound:
                raise FlowBlowupError(
                    f"trajectory norm {norm:.3e} exceeded {self.blowup_bound:.1e} at t={(i + 1) * dt:.4g}"
                )
            states[i + 1] = y
        return states

    def _check_steps(self, steps: Optional[int]) -> int:
        steps = self.steps if steps is None else steps
        if steps < self.min_steps:
            raise ValueError(f"steps must be >= {self.min_steps}, got {steps}")
        return steps

    def trajectory(
        self,
        manifold: ModelManifold,
        f: Observable,
        m0,
        t: float,
        steps: Optional[int] = None
    ) -> np.ndarray:
        """
        Sample the flow of X_f from m0.

        Args:
            manifold: Model with a global Darboux chart
            f: Real observable generating a complete flow
            m0: Initial point
            t: Final time
            steps: RK4 steps (defaults to the configured count)

        Returns:
            Array of shape (steps + 1, 2n) of phase points
        """
        _require_darboux(manifold)
        _require_same_dimension(manifold, f)
        point = _as_point(m0)
        point.validate_on(manifold)
        steps = self._check_steps(steps)
        return self._integrate(f, point.coords, t, steps)[:, :point.coords.size]

    def energy_drift(self, manifold: ModelManifold, f: Observable, m0, t: float,
                     steps: Optional[int] = None) -> float:
        """Max |f(γ(s)) − f(γ(0))| over the sampled trajectory."""
        path = self.trajectory(manifold, f, m0, t, steps)
        values = np.real(f.lambdify()(path))
        return float(np.max(np.abs(values - values[0])))

    def generating_action(
        self,
        manifold: ModelManifold,
        f: Observable,
        m0,
        t: float,
        steps: Optional[int] = None
    ) -> GeneratingAction:
        """
        Compute 𝒮 = −∫₀ᵗ ℒ∘γ dw along the flow of X_f (integration constant 0).

        The error estimate compares the run at ``steps`` with one at half the
        steps (RK4 error ratio 16).

        Args:
            manifold: Model with a global Darboux chart
            f: Real observable generating a complete flow
            m0: Initial point
            t: Integration time
            steps: RK4 steps (>= min_steps)

        Returns:
            GeneratingAction with value, error estimate and energy drift
        """
        _require_darboux(manifold)
        _require_same_dimension(manifold, f)
        point = _as_point(m0)
        point.validate_on(manifold)
        steps = self._check_steps(steps)

        fine = self._integrate(f, point.coords, t, steps)
        coarse = self._integrate(f, point.coords, t, max(steps // 2, 1))
        n2 = point.coords.size

        value = float(fine[-1, n2])
        error = abs(value - float(coarse[-1, n2])) / 15.0
        scale = max(abs(value), float(fine[-1, n2 + 1]))
        relative = error / scale if scale > 0 else 0.0

        energies = np.real(f.lambdify()(fine[:, :n2]))
        drift = float(np.max(np.abs(energies - energies[0])))
        logger.debug("generating action %.12g (error %.2e, drift %.2e)", value, error, drift)

        return GeneratingAction(
            value=value,
            error_estimate=error,
            relative_error=relative,
            final_point=fine[-1, :n2].copy(),
            energy_drift=drift,
            steps=steps
        )


def generating_action(
    manifold: ModelManifold,
    f: Observable,
    m0,
    t: float,
    steps: int = 1024
) -> GeneratingAction:
    """Module-level shortcut using a default HamiltonianFlow."""
    return HamiltonianFlow().generating_action(manifold, f, m0, t, steps)


def bracket_field_defect(f: Observable, g: Observable, points: np.ndarray) -> float:
    """Max |{f,g}(m) − ω(X_f(m), X_g(m))| over sample points of shape (k, 2n)."""
    points = np.asarray(points, dtype=float)
    omega = symplectic_matrix(f.n)
    bracket = poisson_bracket(f, g).lambdify()(points)
    xf = np.linalg.solve(omega.T, gradient(f, points)[..., None])[..., 0]
    xg = np.linalg.solve(omega.T, gradient(g, points)[..., None])[..., 0]
    paired = np.einsum('ki,ij,kj->k', xf, omega, xg)
    return float(np.max(np.abs(bracket - paired)))


def random_polynomial(rng: np.random.Generator, n: int = 1, max_degree: int = 3,
                      coefficient_range: int = 5) -> Observable:
    """Random integer-coefficient polynomial, used for identity sweeps."""
    terms = {}
    for exponents in _exponents(2 * n, max_degree):
        coeff = int(rng.integers(-coefficient_range, coefficient_range + 1))
        if coeff:
            terms[exponents] = coeff
    return Observable.from_terms(terms, n=n)


def _exponents(variables: int, max_degree: int) -> List[Tuple[int, ...]]:
    if variables == 0:
        return [()]
    out = []
    for e in range(max_degree + 1):
        for rest in _exponents(variables - 1, max_degree - e):
            out.append((e,) + rest)
    return out
