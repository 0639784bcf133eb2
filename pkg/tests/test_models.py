import numpy as np
import pytest

from engine.errors import DimensionMismatchError, NonHermitianInputError
from models.basis import BasisSpec, HolomorphicState, OperatorMatrix, WaveFunction
from models.manifold import ComplexStructure, HermitianModelMetric, ModelManifold, PhasePoint
from models.observable import Observable
from models.results import (
    AsymptoticFit, CheckReport, CheckStatus, FresnelSpec, KernelDiagonal, KernelModel, MaslovPhase
)


class TestModelManifold:
    def test_rejects_non_positive_radius(self):
        with pytest.raises(ValueError):
            ModelManifold.sphere(0.0)
        with pytest.raises(ValueError):
            ModelManifold.product_spheres(0.5, -1.0)

    def test_rejects_dependent_lattice(self):
        with pytest.raises(ValueError):
            ModelManifold.torus(lattice=(1.0, 2.0))

    def test_rejects_bad_hbar(self):
        with pytest.raises(ValueError):
            ModelManifold.flat(hbar=0.0)

    def test_disk_domain(self):
        disk = ModelManifold.disk()
        assert disk.contains(0.5)
        assert not disk.contains(1.0)

    def test_symplectic_potential_is_p_dq(self):
        theta = ModelManifold.flat().symplectic_potential(np.array([2.0, 3.0]))
        np.testing.assert_allclose(theta, [3.0, 0.0])
        assert ModelManifold.projective_line().symplectic_potential([0.0, 0.0]) is None


class TestPhasePoint:
    def test_complex_coordinate_is_p_plus_iq(self):
        point = PhasePoint.from_qp(1.0, 2.0)
        assert point.z[0] == 2.0 + 1.0j
        back = PhasePoint.from_complex(2.0 + 1.0j)
        np.testing.assert_allclose(back.coords, [1.0, 2.0])

    def test_odd_coordinates_rejected(self):
        with pytest.raises(ValueError):
            PhasePoint(np.array([1.0, 2.0, 3.0]))

    def test_point_outside_disk(self):
        with pytest.raises(ValueError):
            PhasePoint.from_qp(0.0, 1.5).validate_on(ModelManifold.disk())


class TestComplexStructure:
    def test_standard_metric_is_identity(self):
        np.testing.assert_allclose(ComplexStructure.standard().metric(), np.eye(2))

    def test_rejects_non_complex_structure(self):
        with pytest.raises(ValueError):
            ComplexStructure(np.eye(2))

    def test_rejects_negative_structure(self):
        # J² = −Id and symplectic, but ω(v, Jv) < 0
        with pytest.raises(ValueError):
            ComplexStructure(-ComplexStructure.standard().J)


class TestHermitianModelMetric:
    def test_default_ratios(self):
        assert HermitianModelMetric.for_model(ModelManifold.disk()).curvature_ratio == pytest.approx(np.pi)
        assert HermitianModelMetric.for_model(ModelManifold.flat(hbar=2.0)).curvature_ratio == pytest.approx(0.25)
        assert HermitianModelMetric.for_model(ModelManifold.projective_line(), power=3).curvature_ratio == 3.0

    def test_sphere_has_no_metric(self):
        with pytest.raises(ValueError):
            HermitianModelMetric.for_model(ModelManifold.sphere(1.0))


class TestObservable:
    def test_oscillator_from_complex(self):
        H = Observable.from_complex("z*zbar/2")
        assert H == Observable.from_expr("(p**2 + q**2)/2")
        assert H.is_real()

    def test_complex_coefficients_round_trip(self):
        coefficients = Observable.from_expr("(p**2 + q**2)/2").in_complex_coordinates()
        assert set(coefficients) == {(1, 1)}
        assert coefficients[(1, 1)] == pytest.approx(0.5)

    def test_z_in_canonical_coordinates(self):
        z = Observable.from_complex("z")
        assert z == Observable.from_expr("p + I*q")
        assert not z.is_real()

    def test_unknown_symbol(self):
        with pytest.raises(ValueError):
            Observable.from_expr("q + x")

    def test_laplacian_and_degree(self):
        f = Observable.from_expr("q**3*p + p**2")
        assert f.degree == 4
        assert f.laplacian() == Observable.from_expr("6*q*p + 2")

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            Observable.from_expr("q") + Observable.from_expr("q1", n=2)

    def test_lambdify_vectorized(self):
        f = Observable.from_expr("q*p + 1")
        values = f.lambdify()(np.array([[1.0, 2.0], [3.0, 4.0]]))
        np.testing.assert_allclose(values, [3.0, 13.0])


class TestBasis:
    def test_fock_norms(self):
        state = HolomorphicState.monomial(3, hbar=1.0)
        # ‖z^j‖² = (2ℏ)^j j!
        assert state.norm ** 2 == pytest.approx(8.0 * 6.0)
        np.testing.assert_allclose(HolomorphicState(np.ones(3), hbar=0.5).monomial_norms_sq, [1.0, 1.0, 2.0])

    def test_minimum_order(self):
        with pytest.raises(ValueError):
            BasisSpec.fock(3)

    def test_wave_function_needs_hermite_basis(self):
        with pytest.raises(ValueError):
            WaveFunction(BasisSpec.fock(4), np.zeros(5))

    def test_claimed_hermitian_checked(self):
        basis = BasisSpec.hermite(4)
        entries = np.zeros((5, 5), dtype=complex)
        entries[0, 1] = 1.0
        with pytest.raises(NonHermitianInputError):
            OperatorMatrix(entries, basis, hermitian=True)

    def test_operator_algebra(self):
        basis = BasisSpec.fock(4)
        a = OperatorMatrix(np.eye(5), basis)
        b = OperatorMatrix(2 * np.eye(5), basis)
        np.testing.assert_allclose((a + b).entries, 3 * np.eye(5))
        np.testing.assert_allclose((b @ b).entries, 4 * np.eye(5))
        assert (0.5 * b).is_diagonal()


class TestResults:
    def test_maslov_phase_mod_eight(self):
        phase = MaslovPhase(c=9, magnitude=2.0)
        assert phase.c == 1
        assert phase.value == pytest.approx(2.0 * np.exp(1j * np.pi / 4))

    def test_fresnel_spec_validation(self):
        with pytest.raises(ValueError):
            FresnelSpec(n=1, a=0.0)
        with pytest.raises(ValueError):
            FresnelSpec(n=1, a=1.0, j=1)
        assert FresnelSpec.from_physical(1, t=0.5, mass=2.0, hbar=0.5).a == pytest.approx(0.5)

    def test_kernel_diagonal_homogeneity(self):
        diagonal = KernelDiagonal(KernelModel.BARGMANN_PLANE, 4, [(0j, 2.0), (1j, 2.0)])
        assert diagonal.homogeneity_defect == 0.0
        with pytest.raises(ValueError):
            KernelDiagonal(KernelModel.BARGMANN_PLANE, 4, [(0j, 0.0)])

    def test_fit_normalization(self):
        fit = AsymptoticFit(a0=2.0, a1=1.0, n_hat=1.0, residual=0.0, normalization=2.0)
        assert fit.normalized_a0 == 1.0
        assert fit.to_dict()['normalized_a1'] == 0.5

    def test_warn_counts_as_passed(self):
        report = CheckReport("x", {}, {}, CheckStatus.WARN)
        assert report.passed
        assert not CheckReport("x", {}, {}, CheckStatus.FAIL).passed
