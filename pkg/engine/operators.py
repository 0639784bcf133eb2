"""Quantum operators on truncated Fock and Hermite bases.

Fock side: orthonormal e_j = z^j / ‖z^j‖, ‖z^j‖² = (2ℏ)^j j!, with
Q(z) = z, Q(z̄) = 2ℏ ∂_z and Q(z z̄) = 2ℏ z ∂_z.

Hermite side: Schrödinger representation with ℓ = √(ℏ / (m ω)),
q = (ℓ/√2)(a + a†), p = (iℏ / (ℓ√2))(a† − a). Matrices are filled band by
band from closed forms, never by multiplying truncated matrices, so every
entry equals the corresponding entry of the infinite matrix.
"""

import logging
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.special import roots_hermite

from models.basis import BasisKind, BasisSpec, OperatorMatrix
from models.observable import Observable
from .errors import NonHermitianInputError, PolarizationNotPreservedError
from .phase_space import poisson_bracket
from .quadrature import hermite_polynomial_parts

logger = logging.getLogger(__name__)

COEFFICIENT_EPS = 1e-14

# z^a zbar^b exponents allowed on the Fock side
FOCK_ADMISSIBLE = {(0, 0), (1, 0), (0, 1), (1, 1)}
# q^i p^j exponents allowed on the Hermite side
HERMITE_ADMISSIBLE = {(0, 0), (1, 0), (0, 1), (2, 0), (0, 2), (1, 1)}


def _band(size: int, offset: int, values: np.ndarray) -> np.ndarray:
    """Matrix with ``values`` on the diagonal ``offset`` (row − col = offset)."""
    matrix = np.zeros((size, size), dtype=complex)
    if abs(offset) >= size:
        return matrix
    rows = np.arange(max(offset, 0), size + min(offset, 0))
    matrix[rows, rows - offset] = values[:rows.size]
    return matrix


def _lowering_sq(size: int) -> np.ndarray:
    j = np.arange(size, dtype=float)
    return _band(size, -2, np.sqrt(j[2:] * (j[2:] - 1)))


def _raising_sq(size: int) -> np.ndarray:
    j = np.arange(size, dtype=float)
    return _band(size, 2, np.sqrt((j[:-2] + 1) * (j[:-2] + 2)))


def _lowering(size: int) -> np.ndarray:
    j = np.arange(size, dtype=float)
    return _band(size, -1, np.sqrt(j[1:]))


def _raising(size: int) -> np.ndarray:
    j = np.arange(size, dtype=float)
    return _band(size, 1, np.sqrt(j[:-1] + 1))


def hermite_monomial(exponents: Tuple[int, int], basis: BasisSpec) -> np.ndarray:
    """Matrix of q^i p^j (qp symmetrized) for i + j <= 2."""
    size = basis.size
    ell = basis.length_scale
    hbar = basis.hbar
    diag_odd = np.diag(2.0 * np.arange(size) + 1.0).astype(complex)

    if exponents == (0, 0):
        return np.eye(size, dtype=complex)
    if exponents == (1, 0):
        return (ell / np.sqrt(2.0)) * (_lowering(size) + _raising(size))
    if exponents == (0, 1):
        return (1j * hbar / (ell * np.sqrt(2.0))) * (_raising(size) - _lowering(size))
    if exponents == (2, 0):
        return (ell ** 2 / 2.0) * (diag_odd + _lowering_sq(size) + _raising_sq(size))
    if exponents == (0, 2):
        return (hbar ** 2 / (2.0 * ell ** 2)) * (diag_odd - _lowering_sq(size) - _raising_sq(size))
    if exponents == (1, 1):
        return (1j * hbar / 2.0) * (_raising_sq(size) - _lowering_sq(size))
    raise PolarizationNotPreservedError(f"q^{exponents[0]} p^{exponents[1]} has no Hermite-side operator")


def _admissible_terms(terms: Dict[Tuple[int, ...], complex], allowed, label: str) -> Dict[Tuple[int, ...], complex]:
    kept = {m: c for m, c in terms.items() if abs(c) > COEFFICIENT_EPS}
    bad = sorted(m for m in kept if m not in allowed)
    if bad:
        raise PolarizationNotPreservedError(f"{label}: terms {bad} are not admissible")
    return kept


def _fock_matrix(f: Observable, basis: BasisSpec) -> np.ndarray:
    terms = _admissible_terms(f.in_complex_coordinates(), FOCK_ADMISSIBLE, "holomorphic polarization")
    size = basis.size
    hbar = basis.hbar
    j = np.arange(size, dtype=float)

    a = terms.get((1, 1), 0.0)
    b_z = terms.get((1, 0), 0.0)
    b_zbar = terms.get((0, 1), 0.0)
    c = terms.get((0, 0), 0.0)

    matrix = np.diag(2.0 * a * hbar * j + c).astype(complex)
    matrix += b_z * _band(size, 1, np.sqrt(2.0 * hbar * (j[:-1] + 1)))
    matrix += b_zbar * _band(size, -1, np.sqrt(2.0 * hbar * j[1:]))
    return matrix


def _hermite_matrix(f: Observable, basis: BasisSpec) -> np.ndarray:
    if f.n != 1:
        raise ValueError(f"Hermite basis is one-dimensional, observable has n={f.n}")
    terms = _admissible_terms(f.terms, HERMITE_ADMISSIBLE, "vertical polarization")
    matrix = np.zeros((basis.size, basis.size), dtype=complex)
    for exponents, coeff in terms.items():
        matrix += coeff * hermite_monomial(exponents, basis)
    return matrix


def prequantum_operator(f: Observable, basis: BasisSpec) -> OperatorMatrix:
    """
    Matrix of Q(f) = −iℏ∇_{X_f} + f in a truncated basis.

    Args:
        f: Observable, at most quadratic (a z z̄ + b z + b̄ z̄ + c on the Fock side)
        basis: Fock monomial or Hermite basis

    Returns:
        OperatorMatrix of size (N+1)
    """
    if basis.kind == BasisKind.FOCK_MONOMIAL:
        if f.n != 1:
            raise ValueError(f"Fock basis is one-dimensional, observable has n={f.n}")
        entries = _fock_matrix(f, basis)
    else:
        entries = _hermite_matrix(f, basis)
    return OperatorMatrix(entries, basis)


def half_form_correction(f: Observable, hbar: float = 1.0) -> Observable:
    """ℏ ∂_z ∂_z̄ f = (ℏ/4) Δf; constant for quadratic f."""
    return f.laplacian() * (hbar / 4.0)


def corrected_operator(f: Observable, basis: BasisSpec) -> OperatorMatrix:
    """Q_preq(f) shifted by the half-form correction ℏ ∂_z ∂_z̄ f."""
    correction = half_form_correction(f, basis.hbar)
    if correction.degree > 0:
        raise PolarizationNotPreservedError(f"half-form correction {correction.expr} is not constant")
    shift = correction.terms.get((0,) * (2 * f.n), 0.0)
    return prequantum_operator(f, basis) + OperatorMatrix(shift * np.eye(basis.size), basis)


def spectrum(A: OperatorMatrix, tolerance: Optional[float] = None) -> List[float]:
    """
    Ascending eigenvalues of the interior block.

    Args:
        A: Operator matrix; its ``interior`` rows/cols are used
        tolerance: Hermiticity threshold (defaults to the matrix's own)

    Returns:
        Sorted list of real eigenvalues
    """
    tolerance = A.tolerance if tolerance is None else tolerance
    defect = A.hermiticity_defect()
    if defect > tolerance:
        raise NonHermitianInputError(f"interior block hermiticity defect {defect:.3e} > {tolerance:.1e}")

    block = A.interior_block()
    if block.size == 0:
        return []
    if A.is_diagonal():
        return sorted(float(v) for v in np.real(np.diag(block)))
    return [float(v) for v in np.linalg.eigvalsh(0.5 * (block + block.conj().T))]


def commutator(A: OperatorMatrix, B: OperatorMatrix) -> np.ndarray:
    return A.entries @ B.entries - B.entries @ A.entries


def dirac_defect(f: Observable, g: Observable, basis: BasisSpec) -> float:
    """
    Max |[Q(f), Q(g)] − iℏ Q({f, g})| on the interior block.

    The block keeps the first N − 1 − deg f − deg g rows and columns, where
    products of truncated band matrices agree with the untruncated ones.

    Args:
        f: Admissible observable
        g: Admissible observable
        basis: Hermite basis

    Returns:
        Defect as a max-norm
    """
    if basis.kind != BasisKind.HERMITE:
        raise ValueError("commutator checks use the Hermite basis")
    size = basis.N - 1 - f.degree - g.degree
    if size < 1:
        raise ValueError(f"N={basis.N} leaves no interior block for degrees {f.degree}, {g.degree}")

    qf = prequantum_operator(f, basis)
    qg = prequantum_operator(g, basis)
    bracket = prequantum_operator(poisson_bracket(f, g), basis)
    difference = commutator(qf, qg) - 1j * basis.hbar * bracket.entries
    defect = float(np.max(np.abs(difference[:size, :size])))
    logger.debug("dirac defect {%s, %s} on %d rows: %.3e", f.expr, g.expr, size, defect)
    return defect


def hermite_quadrature_matrix(f: Observable, basis: BasisSpec, nodes: Optional[int] = None) -> np.ndarray:
    """
    ⟨h_i, f(q) h_j⟩ by Gauss–Hermite quadrature, for f independent of p.

    Args:
        f: Polynomial in q only
        basis: Hermite basis
        nodes: Node count (default exact for the polynomial degree)

    Returns:
        Dense (N+1)-square matrix
    """
    if basis.kind != BasisKind.HERMITE:
        raise ValueError("quadrature matrix is defined on the Hermite basis")
    if any(m[1] for m, c in f.terms.items() if abs(c) > COEFFICIENT_EPS):
        raise ValueError(f"{f.expr} depends on p; only multiplication operators are supported")

    nodes = nodes or basis.N + f.degree // 2 + 2
    x, w = roots_hermite(nodes)
    # h_j(x) e^{x²/2} is a polynomial, so the rule is exact
    poly_part = hermite_polynomial_parts(basis.N, x)
    ell = basis.length_scale
    points = np.column_stack([ell * x, np.zeros_like(x)])
    values = f.lambdify()(points)
    return np.einsum('ik,k,jk->ij', poly_part, w * values, poly_part)
