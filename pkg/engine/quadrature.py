"""Quadrature rules, Hermite functions and refinement helpers shared by the engine."""

import logging
from typing import Callable, Sequence, Tuple

import numpy as np
from scipy.special import roots_hermite, roots_legendre

from .errors import QuadratureNonconvergenceError

logger = logging.getLogger(__name__)


def gauss_legendre(n: int, a: float = -1.0, b: float = 1.0) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the n-point Gauss–Legendre rule on [a, b]."""
    x, w = roots_legendre(n)
    half = 0.5 * (b - a)
    return half * x + 0.5 * (a + b), half * w


def gauss_hermite(n: int, a: float = 1.0) -> Tuple[np.ndarray, np.ndarray]:
    """Rule for ∫ e^{-a x²} f(x) dx: returns nodes and weights (weight included)."""
    u, w = roots_hermite(n)
    scale = 1.0 / np.sqrt(a)
    return u * scale, w * scale


def periodic_trapezoid(n: int, period: float = 2.0 * np.pi) -> Tuple[np.ndarray, np.ndarray]:
    """Equally spaced rule on [0, period); spectrally accurate for periodic integrands."""
    x = np.arange(n) * (period / n)
    return x, np.full(n, period / n)


def hermite_functions(N: int, x: np.ndarray) -> np.ndarray:
    """Orthonormal Hermite functions h_0..h_N at x, shape (N + 1, *x.shape).

    Uses the three-term recurrence, stable well past the classical turning points.
    """
    x = np.asarray(x, dtype=float)
    h = np.zeros((N + 1,) + x.shape)
    h[0] = np.pi ** -0.25 * np.exp(-0.5 * x * x)
    if N >= 1:
        h[1] = np.sqrt(2.0) * x * h[0]
    for j in range(1, N):
        h[j + 1] = np.sqrt(2.0 / (j + 1)) * x * h[j] - np.sqrt(j / (j + 1.0)) * h[j - 1]
    return h


def hermite_polynomial_parts(N: int, x: np.ndarray) -> np.ndarray:
    """h_j(x) e^{x²/2} for j = 0..N; finite at nodes where h_j itself underflows."""
    x = np.asarray(x, dtype=float)
    P = np.zeros((N + 1,) + x.shape)
    P[0] = np.pi ** -0.25
    if N >= 1:
        P[1] = np.sqrt(2.0) * x * P[0]
    for j in range(1, N):
        P[j + 1] = np.sqrt(2.0 / (j + 1)) * x * P[j] - np.sqrt(j / (j + 1.0)) * P[j - 1]
    return P


def scaled_hermite_functions(N: int, x: np.ndarray, length: float) -> np.ndarray:
    """h_j(x / ℓ) / √ℓ, orthonormal on R with Lebesgue measure."""
    return hermite_functions(N, np.asarray(x, dtype=float) / length) / np.sqrt(length)


def refine_until_converged(
    evaluate: Callable[[int], np.ndarray],
    start: int,
    max_refinements: int,
    tolerance: float,
    label: str = "quadrature",
    relative: bool = False
) -> Tuple[np.ndarray, float, int]:
    """Double the node count until successive values agree.

    Args:
        evaluate: Maps a node count to a (possibly array-valued) result
        start: Initial node count
        max_refinements: Number of doublings allowed after the first evaluation
        tolerance: Max-abs agreement required between successive levels
        label: Name used in log and error messages
        relative: Measure the difference against max(1, max|value|)

    Returns:
        (value at the finest level, last successive difference, nodes used)
    """
    nodes = start
    previous = np.asarray(evaluate(nodes))
    difference = np.inf
    for _ in range(max_refinements):
        nodes *= 2
        current = np.asarray(evaluate(nodes))
        difference = float(np.max(np.abs(current - previous))) if current.size else 0.0
        if relative and current.size:
            difference /= max(1.0, float(np.max(np.abs(current))))
        logger.debug("%s: %d nodes, successive difference %.3e", label, nodes, difference)
        if difference < tolerance:
            return current, difference, nodes
        previous = current
    raise QuadratureNonconvergenceError(
        f"{label} did not converge: difference {difference:.3e} >= {tolerance:.1e} at {nodes} nodes"
    )


def richardson(values: Sequence[complex], ratio: float = 2.0) -> complex:
    """Extrapolate to h -> 0 from values at h, h/ratio, h/ratio², ...

    Removes one power of h per additional level (error expansion in integer powers).
    """
    table = [np.asarray(v, dtype=complex) for v in values]
    order = 1
    while len(table) > 1:
        factor = ratio ** order
        table = [(factor * fine - coarse) / (factor - 1.0) for coarse, fine in zip(table, table[1:])]
        order += 1
    return table[0]
