"""Szegő kernel diagonals on the Bargmann plane and the projective line, and their k-expansion."""

import logging
from typing import List, Optional, Sequence, Union

import numpy as np
import pandas as pd
from scipy.special import beta, gammaln
from sklearn.linear_model import LinearRegression

from models.results import AsymptoticFit, KernelDiagonal, KernelModel
from .errors import IllConditionedFitError, QuadratureNonconvergenceError
from .quadrature import gauss_legendre, periodic_trapezoid

logger = logging.getLogger(__name__)

MAX_POWER = 128
DEFAULT_LADDER = (8, 12, 16, 24, 32, 48, 64)


def _check_power(k: int) -> None:
    if not 1 <= k <= MAX_POWER:
        raise ValueError(f"tensor power must lie in [1, {MAX_POWER}], got {k}")


def monomial_norms_p1(k: int, tolerance: float = 1e-8) -> List[float]:
    """
    Squared norms of z^j, j = 0..k, for weight (1+|z|²)^{-k} and area form (1+|z|²)^{-2} dx dy.

    With u = |z|² / (1 + |z|²) the norm is π ∫₀¹ u^j (1−u)^{k−j} du.

    Args:
        k: Tensor power
        tolerance: Relative agreement required with the Beta-function value

    Returns:
        k + 1 positive reals
    """
    _check_power(k)
    u, w = gauss_legendre(k // 2 + 8, 0.0, 1.0)
    j = np.arange(k + 1)[:, None]
    norms = np.pi * np.sum(w * u ** j * (1.0 - u) ** (k - j), axis=1)

    closed = np.pi * beta(j[:, 0] + 1, k - j[:, 0] + 1)
    worst = float(np.max(np.abs(norms - closed) / closed))
    if worst > tolerance:
        raise QuadratureNonconvergenceError(f"radial norms for k={k} off the Beta values by {worst:.3e}")
    return [float(v) for v in norms]


def _p1_diagonal(k: int, z: np.ndarray) -> np.ndarray:
    norms = np.asarray(monomial_norms_p1(k))
    r2 = np.abs(z) ** 2
    j = np.arange(k + 1)[:, None]
    # log of |z|^{2j} (1+|z|²)^{-k} / norm_j
    with np.errstate(divide='ignore', invalid='ignore'):
        log_terms = j * np.log(r2)[None, :] - k * np.log1p(r2)[None, :] - np.log(norms)[:, None]
    log_terms[0, :] = -k * np.log1p(r2) - np.log(norms[0])
    return np.exp(np.logaddexp.reduce(log_terms, axis=0))


def _bargmann_diagonal(k: int, z: np.ndarray) -> np.ndarray:
    r2 = np.abs(z) ** 2
    x = k * r2
    # Σ_j x^j / j! truncated far past its peak at j ≈ x
    j_max = int(np.max(x) + 12.0 * np.sqrt(np.max(x) + 1.0) + 40)
    j = np.arange(j_max + 1)[:, None]
    with np.errstate(divide='ignore', invalid='ignore'):
        log_terms = j * np.log(x)[None, :] - gammaln(j + 1)
    log_terms[0, :] = 0.0
    log_series = np.logaddexp.reduce(log_terms, axis=0)
    return (k / np.pi) * np.exp(log_series - x)


def kernel_diagonal(model: Union[KernelModel, str], k: int, points: Sequence[complex]) -> KernelDiagonal:
    """
    Π_k(z, z) = Σ_j |s_j(z)|²_{h^k} over an orthonormal basis of holomorphic sections.

    Args:
        model: Bargmann plane (weight e^{-k|z|²}) or projective line (weight (1+|z|²)^{-k})
        k: Tensor power
        points: Chart points

    Returns:
        KernelDiagonal
    """
    model = KernelModel(model)
    _check_power(k)
    z = np.asarray(points, dtype=complex).reshape(-1)
    if model == KernelModel.PROJECTIVE_LINE:
        values = _p1_diagonal(k, z)
    else:
        values = _bargmann_diagonal(k, z)
    return KernelDiagonal(model=model, k=k, samples=list(zip(z.tolist(), values.tolist())))


def default_points(count: int = 10, radius: float = 2.0) -> List[complex]:
    """Points spread over a spiral in the chart, origin included."""
    t = np.linspace(0.0, 1.0, count)
    return list(radius * t * np.exp(2j * np.pi * 1.618 * np.arange(count)))


def trace_integral(k: int, nodes: int = 64, angles: int = 8) -> float:
    """∫ Π_k dV on the projective line, dV = (1+|z|²)^{-2} dx dy; equals k + 1."""
    _check_power(k)
    u, wu = gauss_legendre(nodes, 0.0, 1.0)
    theta, wt = periodic_trapezoid(angles)
    uu, tt = np.meshgrid(u, theta, indexing='ij')
    z = np.sqrt(uu / (1.0 - uu)) * np.exp(1j * tt)
    values = _p1_diagonal(k, z.ravel()).reshape(z.shape)
    # dV = ½ du dθ in these coordinates
    return float(0.5 * np.einsum('i,ij,j->', wu, values, wt))


class ExpansionFitter:
    """Fits Π_k ≈ a0 k^n + a1 k^(n-1) over a ladder of tensor powers."""

    def __init__(self, min_ladder: int = 6, residual_threshold: float = 1e-3):
        """
        Initialize fitter.

        Args:
            min_ladder: Fewest distinct k accepted
            residual_threshold: Largest relative residual of the (a0, a1) fit
        """
        self.min_ladder = min_ladder
        self.residual_threshold = residual_threshold

    def fit_expansion(self, ks: Sequence[int], values: Sequence[float], normalization: float = 1.0) -> AsymptoticFit:
        """
        Exponent from log Π against [log k, 1/k, 1/k²], then (a0, a1) from Π/k^n = a0 + a1/k.

        Args:
            ks: Tensor powers
            values: Diagonal values Π_k at a fixed point
            normalization: Divides a0 and a1 in the normalized coefficients

        Returns:
            AsymptoticFit
        """
        k = np.asarray(ks, dtype=float)
        pi_k = np.asarray(values, dtype=float)
        if k.size != pi_k.size:
            raise ValueError(f"{k.size} powers but {pi_k.size} values")
        if np.unique(k).size < self.min_ladder:
            raise ValueError(f"ladder needs at least {self.min_ladder} distinct k, got {np.unique(k).size}")
        if np.any(pi_k <= 0):
            raise ValueError("kernel values must be positive")

        design = np.column_stack([np.log(k), 1.0 / k, 1.0 / k ** 2])
        n_hat = float(LinearRegression().fit(design, np.log(pi_k)).coef_[0])
        n = round(n_hat)

        scaled = pi_k / k ** n
        second = LinearRegression().fit((1.0 / k).reshape(-1, 1), scaled)
        a0 = float(second.intercept_)
        a1 = float(second.coef_[0])
        predicted = second.predict((1.0 / k).reshape(-1, 1))
        residual = float(np.max(np.abs(scaled - predicted)) / max(abs(a0), np.finfo(float).tiny))
        if residual > self.residual_threshold:
            raise IllConditionedFitError(f"expansion fit residual {residual:.3e} > {self.residual_threshold:.1e}")

        logger.debug("fit n_hat=%.6f a0=%.9g a1=%.9g residual=%.2e", n_hat, a0, a1, residual)
        return AsymptoticFit(a0=a0, a1=a1, n_hat=n_hat, residual=residual, normalization=normalization)

    def reference_fit(self, ks: Sequence[int], points: Sequence[complex]) -> AsymptoticFit:
        """Unnormalized fit of the Bargmann-plane diagonals; its a0 is the flat slope of Π_k / k."""
        diagonals = [kernel_diagonal(KernelModel.BARGMANN_PLANE, int(k), points) for k in ks]
        return self.fit_diagonals(diagonals)

    def fit_diagonals(
        self,
        diagonals: Sequence[KernelDiagonal],
        reference: Optional[AsymptoticFit] = None
    ) -> AsymptoticFit:
        """Fit of the mean diagonal values, normalized by the leading coefficient of ``reference``."""
        normalization = reference.a0 if reference is not None else 1.0
        return self.fit_expansion([d.k for d in diagonals], [d.mean for d in diagonals], normalization)


def fit_expansion(
    diagonals: Sequence[KernelDiagonal],
    fitter: Optional[ExpansionFitter] = None,
    reference: Optional[AsymptoticFit] = None
) -> AsymptoticFit:
    """
    Expansion fit normalized by the Bargmann plane sampled at the same points.

    Args:
        diagonals: Kernel diagonals over a ladder of k, sharing their sample points
        fitter: Fitter settings (defaults when omitted)
        reference: Precomputed Bargmann-plane fit; built from the first diagonal's points otherwise

    Returns:
        AsymptoticFit
    """
    fitter = fitter or ExpansionFitter()
    if reference is None:
        points = [z for z, _ in diagonals[0].samples]
        reference = fitter.reference_fit([d.k for d in diagonals], points)
    return fitter.fit_diagonals(diagonals, reference)


def ladder_table(model: Union[KernelModel, str], ks: Sequence[int] = DEFAULT_LADDER,
                 points: Optional[Sequence[complex]] = None) -> pd.DataFrame:
    """Mean diagonal value per k, columns ``k,value``."""
    points = default_points() if points is None else points
    rows = [{'k': int(k), 'value': kernel_diagonal(model, int(k), points).mean} for k in ks]
    return pd.DataFrame(rows, columns=['k', 'value'])
