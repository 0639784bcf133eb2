"""BKS pairings between polarizations: Fourier, Segal–Bargmann and Bogoliubov.

Position states use the Hermite basis h_j(q/ℓ)/√ℓ and momentum states the
Hermite basis of length ℏ/ℓ, so the Fourier projection acts on coefficients.
The Fock space carries the measure (1/2π) e^{-|w|²/2} dx dy, w = x + iy,
which gives the constant state unit norm.
"""

import logging
from functools import lru_cache
from typing import Callable, Optional, Tuple, Union

import numpy as np

from models.basis import BasisKind, BasisSpec, HolomorphicState, Representation, WaveFunction
from models.manifold import ComplexStructure, kahler_form_matrix
from models.results import BogoliubovGroundState, PairingResult, RoundTripReport
from .errors import QuadratureNonconvergenceError, SingularSumError, TailMassError
from .quadrature import gauss_hermite, hermite_polynomial_parts, refine_until_converged, scaled_hermite_functions

logger = logging.getLogger(__name__)

# Segal–Bargmann normalization fixed by the image of the constant state
SEGAL_BARGMANN_C = np.pi ** 0.25


def _require_hermite(basis: BasisSpec) -> None:
    if basis.kind != BasisKind.HERMITE:
        raise ValueError(f"expected a Hermite basis, got {basis.kind.value}")


def representation_length(basis: BasisSpec, representation: Representation) -> float:
    """Length scale of the Hermite functions in the given representation."""
    ell = basis.length_scale
    return ell if representation == Representation.POSITION else basis.hbar / ell


def evaluate(wave: WaveFunction, x: np.ndarray) -> np.ndarray:
    """Values of a wave function at points of its own representation."""
    length = representation_length(wave.basis, wave.representation)
    return wave.coeffs @ scaled_hermite_functions(wave.basis.N, x, length)


def project_function(
    func: Callable[[np.ndarray], np.ndarray],
    basis: BasisSpec,
    representation: Representation = Representation.POSITION,
    nodes: int = 128
) -> WaveFunction:
    """
    Hermite coefficients of a function, with the norm lost to truncation.

    Args:
        func: Vectorized square-integrable function, at most Gaussian decay rate 1/2 in units of ℓ
        basis: Hermite basis
        representation: Variable the function depends on
        nodes: Gauss–Hermite nodes (weight e^{-u²/2})

    Returns:
        WaveFunction with tail_mass = 1 − ‖coeffs‖² / ‖func‖²
    """
    _require_hermite(basis)
    length = representation_length(basis, representation)
    u, w = gauss_hermite(nodes, 0.5)
    values = np.asarray(func(length * u), dtype=complex)
    coeffs = np.sqrt(length) * (hermite_polynomial_parts(basis.N, u) @ (w * values))
    total = length * float(np.sum(w * np.exp(0.5 * u * u) * np.abs(values) ** 2))
    kept = float(np.sum(np.abs(coeffs) ** 2))
    tail = max(0.0, 1.0 - kept / total) if total > 0 else 0.0
    return WaveFunction(basis, coeffs, representation, tail_mass=tail)


class FourierTransform:
    """Momentum-to-position projection Pψ(q) = (2πℏ)^{-1/2} ∫ ψ(p) e^{ipq/ℏ} dp."""

    def __init__(
        self,
        start_nodes: int = 32,
        max_refinements: int = 4,
        tolerance: float = 1e-9,
        tail_tolerance: float = 1e-8
    ):
        """
        Initialize transform.

        Args:
            start_nodes: Gauss–Hermite nodes per axis at the first level
            max_refinements: Number of node doublings allowed
            tolerance: Agreement required between successive levels
            tail_tolerance: Largest tail mass accepted on input states
        """
        self.start_nodes = start_nodes
        self.max_refinements = max_refinements
        self.tolerance = tolerance
        self.tail_tolerance = tail_tolerance

    @staticmethod
    def _matrix_at(N: int, nodes: int) -> np.ndarray:
        # M[k, j] = (2π)^{-1/2} ∫∫ h_k(v) h_j(u) e^{iuv} du dv
        x, w = gauss_hermite(nodes, 0.5)
        P = hermite_polynomial_parts(N, x) * w
        kernel = np.exp(1j * np.outer(x, x))
        return (P @ kernel @ P.T) / np.sqrt(2.0 * np.pi)

    def matrix(self, N: int) -> np.ndarray:
        """Coefficient matrix of the projection, refined until converged."""
        return _cached_fourier_matrix(N, self.start_nodes, self.max_refinements, self.tolerance)[0]

    @staticmethod
    def exact_phases(N: int) -> np.ndarray:
        """h_j ↦ i^j h_j."""
        return 1j ** np.arange(N + 1)

    def _check_tail(self, wave: WaveFunction) -> None:
        if wave.tail_mass >= self.tail_tolerance:
            raise TailMassError(f"tail mass {wave.tail_mass:.3e} >= {self.tail_tolerance:.1e}")

    def fourier_projection(self, wave: WaveFunction) -> WaveFunction:
        """
        Project a momentum-representation state into the position representation.

        Args:
            wave: State in the momentum representation

        Returns:
            State in the position representation, same basis
        """
        _require_hermite(wave.basis)
        if wave.representation != Representation.MOMENTUM:
            raise ValueError("fourier_projection expects a momentum-representation state")
        self._check_tail(wave)
        coeffs = self.matrix(wave.basis.N) @ wave.coeffs
        return WaveFunction(wave.basis, coeffs, Representation.POSITION, wave.tail_mass)

    def inverse_fourier_projection(self, wave: WaveFunction) -> WaveFunction:
        """Adjoint projection, position to momentum."""
        _require_hermite(wave.basis)
        if wave.representation != Representation.POSITION:
            raise ValueError("inverse_fourier_projection expects a position-representation state")
        self._check_tail(wave)
        coeffs = self.matrix(wave.basis.N).conj().T @ wave.coeffs
        return WaveFunction(wave.basis, coeffs, Representation.MOMENTUM, wave.tail_mass)

    def project(self, wave: WaveFunction, target: Representation) -> WaveFunction:
        if wave.representation == target:
            return wave
        if target == Representation.POSITION:
            return self.fourier_projection(wave)
        return self.inverse_fourier_projection(wave)

    def unitarity_defect(self, N: int) -> float:
        """Max deviation of the Gram matrix of the images of h_0..h_N from the identity."""
        M = self.matrix(N)
        return float(np.max(np.abs(M.conj().T @ M - np.eye(N + 1))))


@lru_cache(maxsize=32)
def _cached_fourier_matrix(N: int, start: int, refinements: int, tolerance: float) -> Tuple[np.ndarray, float]:
    value, difference, nodes = refine_until_converged(
        lambda n: FourierTransform._matrix_at(N, n), start, refinements, tolerance, label="fourier matrix"
    )
    logger.debug("fourier matrix N=%d converged at %d nodes", N, nodes)
    return value, difference


class SegalBargmannTransform:
    """Real-to-Kähler projection with kernel (C/√π) e^{-q²/2 + iq w̄ + w̄²/4}.

    Works in units ℏ = m = ω = 1, where P maps the orthonormal monomial
    z^m / ‖z^m‖ to i^m h_m.
    """

    def __init__(
        self,
        start_nodes: int = 32,
        max_refinements: int = 4,
        tolerance: float = 1e-9,
        circle_radius: float = 2.0,
        constant: float = SEGAL_BARGMANN_C
    ):
        """
        Initialize transform.

        Args:
            start_nodes: Gauss–Hermite nodes per axis at the first level
            max_refinements: Number of node doublings allowed
            tolerance: Relative agreement required between successive levels
            circle_radius: Radius of the circle used for Taylor extraction
            constant: Kernel constant C
        """
        self.start_nodes = start_nodes
        self.max_refinements = max_refinements
        self.tolerance = tolerance
        self.circle_radius = circle_radius
        self.constant = constant

    @staticmethod
    def _require_units(basis: BasisSpec) -> None:
        _require_hermite(basis)
        if abs(basis.hbar - 1.0) > 1e-15 or abs(basis.length_scale - 1.0) > 1e-15:
            raise ValueError("the Segal–Bargmann transform is set up for ℏ = m = ω = 1")

    # ---- P: Fock -> position ---------------------------------------------

    def _monomial_images(self, q: np.ndarray, degree: int, nodes: int) -> np.ndarray:
        """e^{q²/2} P(z^m)(q) for m = 0..degree, shape (degree + 1, len(q))."""
        # weights e^{-x²/4} and e^{-3y²/4}; the rest of the kernel stays in the integrand
        x, wx = gauss_hermite(nodes, 0.25)
        y, wy = gauss_hermite(nodes, 0.75)
        xx, yy = np.meshgrid(x, y, indexing='ij')
        weights = np.outer(wx, wy)
        w = xx + 1j * yy
        prefactor = self.constant / np.sqrt(np.pi) / (2.0 * np.pi)

        out = np.zeros((degree + 1, q.size), dtype=complex)
        for a, qa in enumerate(q):
            base = weights * np.exp(1j * qa * xx + qa * yy - 0.5j * xx * yy)
            power = np.ones_like(w)
            for m in range(degree + 1):
                out[m, a] = prefactor * np.sum(base * power)
                power = power * w
        return out

    def _position_matrix_at(self, N: int, degree: int, nodes: int) -> np.ndarray:
        # T[k, m] = ⟨h_k, P(e_m)⟩, exact q-rule since both factors are polynomials times e^{-q²/2}
        q, wq = gauss_hermite(N + degree // 2 + 2, 1.0)
        images = self._monomial_images(q, degree, nodes)
        norms = np.sqrt(HolomorphicState.monomial(degree).monomial_norms_sq)
        return (hermite_polynomial_parts(N, q) * wq) @ (images.T / norms)

    def position_matrix(self, N: int, degree: Optional[int] = None) -> np.ndarray:
        """Hermite coefficients (rows, 0..N) of the images of orthonormal monomials (cols)."""
        degree = N if degree is None else degree
        value, _, nodes = refine_until_converged(
            lambda n: self._position_matrix_at(N, degree, n),
            self.start_nodes, self.max_refinements, self.tolerance,
            label="segal-bargmann image", relative=True
        )
        return value

    def to_position(self, state: HolomorphicState, basis: BasisSpec) -> WaveFunction:
        """
        Segal–Bargmann image of a holomorphic state, projected on the Hermite basis.

        Args:
            state: Polynomial state in the Fock space
            basis: Hermite basis (ℏ = ℓ = 1)

        Returns:
            Position-representation WaveFunction
        """
        self._require_units(basis)
        if abs(state.hbar - 1.0) > 1e-15:
            raise ValueError("holomorphic state must use ℏ = 1")
        coeffs = self.position_matrix(basis.N, state.N) @ state.orthonormal_coeffs()
        return WaveFunction(basis, coeffs, Representation.POSITION)

    def evaluate_position(self, state: HolomorphicState, q: np.ndarray) -> np.ndarray:
        """P(φ)(q) pointwise by the two-dimensional kernel integral."""
        q = np.atleast_1d(np.asarray(q, dtype=float))

        def at(nodes: int) -> np.ndarray:
            images = self._monomial_images(q, state.N, nodes)
            return (state.coeffs @ images) * np.exp(-0.5 * q * q)

        value, _, _ = refine_until_converged(
            at, self.start_nodes, self.max_refinements, self.tolerance,
            label="segal-bargmann values", relative=True
        )
        return value

    # ---- P': position -> Fock --------------------------------------------

    def _fock_matrix_at(self, N: int, nodes: int, degree: int) -> np.ndarray:
        """F[j, k]: orthonormal Fock coefficient j of P'(h_k), kernel K holomorphic in w."""
        samples = 4 * (degree + 1)
        circle = self.circle_radius * np.exp(2j * np.pi * np.arange(samples) / samples)
        q, wq = gauss_hermite(nodes, 1.0)
        # ψ(q) e^{-q²/2} = P_k(q) e^{-q²}
        integrals = (hermite_polynomial_parts(N, q) * wq) @ np.exp(-1j * np.outer(q, circle))
        prefactor = self.constant / np.sqrt(np.pi) / (2.0 * np.pi)
        values = prefactor * integrals * np.exp(circle ** 2 / 4.0)

        raw = np.fft.fft(values, axis=1)[:, :degree + 1] / samples
        raw = raw / self.circle_radius ** np.arange(degree + 1)
        norms = np.sqrt(HolomorphicState.monomial(degree).monomial_norms_sq)
        return (raw * norms).T

    def fock_matrix(self, N: int, degree: Optional[int] = None) -> np.ndarray:
        degree = N if degree is None else degree
        value, _, _ = refine_until_converged(
            lambda n: self._fock_matrix_at(N, n, degree),
            self.start_nodes, self.max_refinements, self.tolerance,
            label="inverse segal-bargmann", relative=True
        )
        return value

    def to_fock(self, wave: WaveFunction) -> HolomorphicState:
        """
        P'(ψ)(w) = (1/2π) ∫ ψ(q) K(q, w) dq, Taylor-extracted at the origin.

        Args:
            wave: Position-representation state (ℏ = ℓ = 1)

        Returns:
            HolomorphicState with monomial coefficients up to z^N
        """
        self._require_units(wave.basis)
        if wave.representation != Representation.POSITION:
            raise ValueError("to_fock expects a position-representation state")
        ortho = self.fock_matrix(wave.basis.N) @ wave.coeffs
        norms = HolomorphicState.monomial(wave.basis.N).monomial_norms_sq
        return HolomorphicState(ortho / np.sqrt(norms), hbar=1.0)

    def round_trip(self, N: int, tolerance: float = 1e-6) -> RoundTripReport:
        """
        P ∘ P' on span{h_0..h_N}, with the signs the conjugate-kernel reading produces.

        Args:
            N: Truncation order
            tolerance: Identity defect accepted for a positive multiple

        Returns:
            RoundTripReport
        """
        T = self.position_matrix(N)
        F = self.fock_matrix(N)
        product = T @ F
        multiple = float(np.real(np.mean(np.diag(product))))
        defect = float(np.max(np.abs(product - multiple * np.eye(N + 1))))

        # K̄ in place of K conjugates P'(h_k) for the real basis h_k
        printed = T @ F.conj()
        signs = [int(np.sign(v)) for v in np.real(np.diag(printed))]
        conjugation_needed = any(s <= 0 for s in signs)
        if conjugation_needed:
            logger.warning("conjugate kernel in P' gives round-trip signs %s; using K", signs)
        return RoundTripReport(
            multiple=multiple,
            identity_defect=defect,
            is_positive_multiple=multiple > 0 and defect <= tolerance * abs(multiple),
            printed_kernel_signs=signs,
            conjugation_needed=conjugation_needed
        )

    def norm_ratios(self, degree: int = 8) -> np.ndarray:
        """‖P(z^m)‖ / ‖z^m‖ for m = 0..degree."""
        T = self.position_matrix(degree, degree)
        return np.linalg.norm(T, axis=0)

    def eigenfunction_overlaps(self, degree: int = 8) -> np.ndarray:
        """|⟨P(z^m), h_m⟩| / ‖P(z^m)‖ for m = 0..degree."""
        T = self.position_matrix(degree, degree)
        return np.abs(np.diag(T)) / np.linalg.norm(T, axis=0)


def _uniform_grid(basis: BasisSpec, representation: Representation, step: float = 0.05) -> Tuple[np.ndarray, float]:
    length = representation_length(basis, representation)
    half_width = np.sqrt(2.0 * basis.N + 1.0) + 8.0
    count = int(2 * half_width / step) + 1
    x = length * np.linspace(-half_width, half_width, count)
    return x, float(x[1] - x[0])


def _fourier_double_integral(s1: WaveFunction, s2: WaveFunction) -> complex:
    """⟨s1, P s2⟩ as one double integral on uniform grids."""
    hbar = s1.basis.hbar
    x1, d1 = _uniform_grid(s1.basis, s1.representation)
    x2, d2 = _uniform_grid(s2.basis, s2.representation)
    # kernel e^{i x1 x2 / ℏ} projects momentum to position; its conjugate the reverse
    sign = 1.0 if s2.representation == Representation.MOMENTUM else -1.0
    kernel = np.exp(sign * 1j * np.outer(x1, x2) / hbar) / np.sqrt(2.0 * np.pi * hbar)
    image = (kernel @ evaluate(s2, x2)) * d2
    return complex(np.sum(evaluate(s1, x1) * np.conj(image)) * d1)


def _segal_bargmann_double_integral(
    s1: WaveFunction,
    s2: HolomorphicState,
    transform: SegalBargmannTransform,
    chunk: int = 32
) -> complex:
    x, dx = _uniform_grid(s1.basis, Representation.POSITION, step=0.1)
    image = np.concatenate([transform.evaluate_position(s2, x[i:i + chunk]) for i in range(0, x.size, chunk)])
    return complex(np.sum(evaluate(s1, x) * np.conj(image)) * dx)


def bks_pair(
    s1: WaveFunction,
    s2: Union[WaveFunction, HolomorphicState],
    kind: str = "fourier",
    fourier: Optional[FourierTransform] = None,
    segal_bargmann: Optional[SegalBargmannTransform] = None,
    agreement_tolerance: float = 1e-7
) -> PairingResult:
    """
    ⟨⟨s1, s2⟩⟩ = ⟨s1, P s2⟩ with P projecting into the polarization of s1.

    The value comes from projecting then taking the coefficient inner product;
    the alternate value is a direct double integral on uniform grids.

    Args:
        s1: Real-polarized state
        s2: Real-polarized state (fourier) or holomorphic state (segal_bargmann)
        kind: "fourier" or "segal_bargmann"
        fourier: Configured transform (default settings when omitted)
        segal_bargmann: Configured transform (default settings when omitted)
        agreement_tolerance: Largest accepted disagreement between the two routes

    Returns:
        PairingResult
    """
    kind = kind.replace("-", "_")
    if kind == "fourier":
        if not isinstance(s2, WaveFunction):
            raise ValueError("fourier pairing takes two wave functions")
        if s1.basis != s2.basis:
            raise ValueError("fourier pairing needs matching truncations")
        fourier = fourier or FourierTransform()
        projected = fourier.project(s2, s1.representation)
        value = s1.inner(projected)
        if s1.representation == s2.representation:
            alternate = value
        else:
            alternate = _fourier_double_integral(s1, s2)
    elif kind == "segal_bargmann":
        if not isinstance(s2, HolomorphicState):
            raise ValueError("segal_bargmann pairing takes a holomorphic second argument")
        segal_bargmann = segal_bargmann or SegalBargmannTransform()
        value = s1.inner(segal_bargmann.to_position(s2, s1.basis))
        alternate = _segal_bargmann_double_integral(s1, s2, segal_bargmann)
    else:
        raise ValueError(f"unknown pairing kind {kind!r}")

    error = abs(value - alternate)
    scale = max(1.0, abs(value))
    if error > agreement_tolerance * scale:
        raise QuadratureNonconvergenceError(
            f"{kind} pairing routes disagree by {error:.3e} (value {value:.6g})"
        )
    return PairingResult(value=complex(value), quadrature_error_estimate=float(error), alternate_value=complex(alternate))


# ---- Bogoliubov -----------------------------------------------------------

def squeezed_structure(s: float) -> ComplexStructure:
    """J₂ = S J S^{-1} with S = diag(e^s, e^{-s})."""
    S = np.diag([np.exp(s), np.exp(-s)])
    return ComplexStructure(S @ ComplexStructure.standard().J @ np.linalg.inv(S))


def _symmetric(A: np.ndarray) -> np.ndarray:
    return 0.5 * (A + A.T)


def bogoliubov_ground_state(
    J1: ComplexStructure,
    J2: ComplexStructure,
    exponent_scale: float = 0.125,
    singular_threshold: float = 1e-12
) -> BogoliubovGroundState:
    """
    Projection of the J₂ vacuum into the J₁ Fock space.

    det_factor = [det ½(J₁+J₂)]^{-1/2}, L = (J₁+J₂)^{-1}(J₁−J₂) and
    λ(v) = 2ω(v, J₁Lv) − 2iω(v, Lv). The holomorphic factor is
    det_factor · e^{exponent_scale · λ}.

    Args:
        J1: Reference complex structure
        J2: Second complex structure, compatible with the same ω
        exponent_scale: Multiplier of λ in the exponent
        singular_threshold: Smallest |det(J₁+J₂)| accepted

    Returns:
        BogoliubovGroundState
    """
    if J1.n != J2.n:
        raise ValueError(f"complex structures on R^{2 * J1.n} and R^{2 * J2.n}")
    total = J1.J + J2.J
    det_total = float(np.linalg.det(total))
    if abs(det_total) < singular_threshold:
        raise SingularSumError(f"det(J1 + J2) = {det_total:.3e}")

    # real compatible structures give det ½(J1+J2) > 0, so the principal branch is continuous
    det_half = complex(np.linalg.det(0.5 * total))
    det_factor = complex(1.0 / np.sqrt(det_half))

    L = np.linalg.solve(total, J1.J - J2.J)
    omega = kahler_form_matrix(J1.n)
    lambda_real = _symmetric(2.0 * omega @ J1.J @ L)
    lambda_imag = _symmetric(-2.0 * omega @ L)
    return BogoliubovGroundState(
        det_factor=det_factor,
        lambda_real=lambda_real,
        lambda_imag=lambda_imag,
        L=L,
        exponent_scale=exponent_scale
    )


def _oracle_exponent(J2: ComplexStructure) -> Tuple[np.ndarray, float]:
    n = J2.n
    M = np.eye(2 * n) + J2.metric()
    return M, float(np.linalg.det(M))


def bogoliubov_closed_form(J2: ComplexStructure, z: np.ndarray) -> np.ndarray:
    """(1/2π) ∫ e^{z·w̄/2} e^{-¼ wᵀ(I+G₂)w} dx dy in closed Gaussian form."""
    z = np.asarray(z, dtype=complex).reshape(-1, J2.n)
    M, det_M = _oracle_exponent(J2)
    b = 0.5 * np.concatenate([z, -1j * z], axis=-1)
    quad = np.einsum('...i,ij,...j->...', b, np.linalg.inv(M), b)
    return (2.0 ** J2.n / np.sqrt(det_M)) * np.exp(quad)


def bogoliubov_oracle(J2: ComplexStructure, z: np.ndarray, nodes: int = 48) -> np.ndarray:
    """
    The projected J₂ vacuum by Gauss–Hermite quadrature of the pairing integral.

    Args:
        J2: Complex structure of the vacuum being projected
        z: Points of shape (k, n) (or (k,) when n = 1)
        nodes: Nodes per axis, weight-matched to the principal axes of I + G₂

    Returns:
        Values at each point, shape (k,)
    """
    n = J2.n
    z = np.asarray(z, dtype=complex).reshape(-1, n)
    M, _ = _oracle_exponent(J2)
    eigenvalues, rotation = np.linalg.eigh(M)

    axes = [gauss_hermite(nodes, 0.25 * ev) for ev in eigenvalues]
    grids = np.meshgrid(*[a[0] for a in axes], indexing='ij')
    weights = np.ones_like(grids[0])
    for k, (_, w) in enumerate(axes):
        shape = [1] * len(axes)
        shape[k] = -1
        weights = weights * w.reshape(shape)

    u = np.stack([g.ravel() for g in grids], axis=-1)
    v = u @ rotation.T
    w_bar = v[:, :n] - 1j * v[:, n:]
    phases = np.exp(0.5 * z @ w_bar.T)
    return (phases @ weights.ravel()) / (2.0 * np.pi) ** n


def bogoliubov_defect(state: BogoliubovGroundState, J2: ComplexStructure, z: np.ndarray, nodes: int = 48) -> float:
    """Max |state amplitude − quadrature oracle| over the points z."""
    z = np.asarray(z, dtype=complex).reshape(-1, J2.n)
    v = np.concatenate([z.real, z.imag], axis=-1)
    return float(np.max(np.abs(state.amplitude(v) - bogoliubov_oracle(J2, z, nodes))))


def printed_exponent_ratio(state: BogoliubovGroundState, J2: ComplexStructure, z: complex = 0.5 + 0.25j) -> float:
    """Ratio of the exponent λ/4 to the exponent the oracle measures at z."""
    zz = np.array([[z]], dtype=complex)
    measured = np.log(bogoliubov_closed_form(J2, zz)[0] / state.det_factor)
    v = np.array([[z.real, z.imag]])
    printed = 0.25 * state.lam(v)[0]
    if abs(measured) < 1e-14:
        return 1.0
    return float(np.real(printed / measured))
