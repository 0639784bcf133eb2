import numpy as np
import pytest

from engine.errors import DegenerateLatticeError, OpenLoopError, StencilOutOfDomainError, UnsupportedManifoldError
from engine.prequant import (
    CurvatureGrid,
    CurvatureProbe,
    OscillatorGeometry,
    QuantizabilityChecker,
    bohr_sommerfeld_levels,
    check_torus_lattice,
    cylinder_loop,
    cylinder_momentum_levels,
    holonomy_loop,
    lattice_pairing,
    oscillator_loop,
)
from models.manifold import HermitianModelMetric, ModelManifold


@pytest.fixture
def checker():
    return QuantizabilityChecker()


class TestIntegration:
    @pytest.mark.parametrize("radius", [0.3, 1.0, 2.5])
    def test_sphere_area(self, checker, radius):
        value = checker.integrate_symplectic_form(ModelManifold.sphere(radius))
        assert value / (4 * np.pi * radius) == pytest.approx(1.0, abs=1e-6)

    def test_projective_line_degree(self, checker):
        assert checker.projective_line_degree() == pytest.approx(1.0, abs=1e-6)

    def test_torus_area(self, checker):
        value = checker.integrate_symplectic_form(ModelManifold.torus(2.0, (1.0, 1j)))
        assert value == pytest.approx(4 * np.pi, rel=1e-10)

    def test_non_compact_rejected(self, checker):
        with pytest.raises(UnsupportedManifoldError):
            checker.integrate_symplectic_form(ModelManifold.disk())


class TestPC1:
    def test_half_hbar_sphere_is_quantizable(self, checker):
        report = checker.check_pc1(ModelManifold.sphere(0.5))
        assert report.is_integral
        assert report.integral_value == pytest.approx(2 * np.pi)
        assert report.ratio == pytest.approx(1.0, abs=1e-9)

    def test_three_quarter_sphere(self, checker):
        report = checker.check_pc1(ModelManifold.sphere(0.75))
        assert not report.is_integral
        assert report.nearest_admissible_parameters == pytest.approx([0.5, 1.0])

    def test_equal_products(self, checker):
        report = checker.check_pc1(ModelManifold.product_spheres(0.5, 0.5))
        assert report.is_integral
        assert report.factor_ratios == pytest.approx([1.0, 1.0])

    def test_incommensurable_product(self, checker):
        report = checker.check_pc1(ModelManifold.product_spheres(0.5, 0.5 * np.sqrt(2)))
        assert not report.is_integral
        assert report.ratio == pytest.approx(np.sqrt(2), abs=1e-8)

    def test_scale_consistency(self, checker):
        once = checker.check_pc1(ModelManifold.sphere(1.3, hbar=1.0)).ratio
        twice = checker.check_pc1(ModelManifold.sphere(1.3, hbar=2.0)).ratio
        assert twice == pytest.approx(once / 2, rel=1e-14)

    def test_projective_line_period(self, checker):
        report = checker.check_pc1(ModelManifold.projective_line())
        assert report.period == pytest.approx(np.pi)
        assert report.is_integral

    def test_admissible_radii(self, checker):
        radii = checker.admissible_parameters(ModelManifold.sphere(1.0, hbar=1.0))
        assert radii[:3] == pytest.approx([0.5, 1.0, 1.5])


class TestTorusLattice:
    def test_unit_form(self):
        assert check_torus_lattice(1.0, (1.0, 1j))

    def test_half_form(self):
        assert not check_torus_lattice(0.5, (1.0, 1j))

    def test_stretched_lattice(self):
        assert check_torus_lattice(lambda z, w: z * np.conj(w), (1.0, 2j))

    def test_pairing_value(self):
        assert lattice_pairing(0.5, (1.0, 1j)) == pytest.approx(0.5)

    def test_degenerate(self):
        with pytest.raises(DegenerateLatticeError):
            check_torus_lattice(1.0, (1.0, 3.0))


class TestCurvature:
    def test_disk(self):
        metric = HermitianModelMetric.for_model(ModelManifold.disk())
        assert CurvatureProbe().curvature_defect(metric, CurvatureGrid(0.7, 20)) <= 1e-4

    def test_torus(self):
        metric = HermitianModelMetric.for_model(ModelManifold.torus())
        assert CurvatureProbe().curvature_defect(metric, CurvatureGrid(0.7, 20)) <= 1e-4

    def test_flat(self):
        metric = HermitianModelMetric.for_model(ModelManifold.flat())
        assert CurvatureProbe().curvature_defect(metric, CurvatureGrid(0.7, 20)) <= 1e-6

    def test_projective_line_power(self):
        metric = HermitianModelMetric.for_model(ModelManifold.projective_line(), power=2)
        assert CurvatureProbe().curvature_defect(metric, CurvatureGrid(0.7, 20)) <= 1e-4

    def test_second_order_convergence(self):
        metric = HermitianModelMetric.for_model(ModelManifold.disk())
        slope, defects = CurvatureProbe().curvature_convergence(metric, CurvatureGrid(0.7, 20))
        assert abs(slope - 2.0) <= 0.4
        assert defects[-1] < defects[0]

    def test_stencil_leaves_disk(self):
        metric = HermitianModelMetric.for_model(ModelManifold.disk())
        with pytest.raises(StencilOutOfDomainError):
            CurvatureProbe(step=0.01).curvature_defect(metric, CurvatureGrid(0.999, 21))

    @pytest.mark.parametrize("manifold", [
        ModelManifold.flat(),
        ModelManifold.disk(),
        ModelManifold.torus(hermitian_scale=0.5),
        ModelManifold.projective_line(),
        ModelManifold.sphere(1.0),
        ModelManifold.sphere(0.25, hbar=0.5),
    ], ids=["flat", "disk", "torus", "projective-line", "sphere", "small-sphere"])
    def test_kahler_potential_generates_form(self, manifold):
        assert CurvatureProbe().kahler_defect(manifold, CurvatureGrid(0.7, 20)) <= 1e-4

    def test_kahler_defect_sees_a_wrong_potential(self):
        # torus potential at scale 1 against the form at scale 2
        class Mismatched(ModelManifold):
            def kahler_potential(self, z):
                return np.pi * np.abs(np.asarray(z, dtype=complex)) ** 2

        defect = CurvatureProbe().kahler_defect(Mismatched.torus(hermitian_scale=2.0), CurvatureGrid(0.7, 20))
        assert defect == pytest.approx(2.0 * np.pi, rel=1e-6)

    def test_kahler_stencil_leaves_disk(self):
        with pytest.raises(StencilOutOfDomainError):
            CurvatureProbe(step=0.01).kahler_defect(ModelManifold.disk(), CurvatureGrid(0.999, 21))

    def test_no_kahler_potential_on_cylinder(self):
        with pytest.raises(UnsupportedManifoldError):
            CurvatureProbe().kahler_defect(ModelManifold.cylinder(), CurvatureGrid(0.7, 20))


class TestHolonomy:
    def test_circle_action(self):
        result = holonomy_loop(ModelManifold.flat(), oscillator_loop(1.0))
        assert result.action == pytest.approx(2 * np.pi, rel=1e-8)
        assert abs(result.phase) == pytest.approx(1.0)

    def test_reversed_circle(self):
        result = holonomy_loop(ModelManifold.flat(), oscillator_loop(1.0)[::-1])
        assert result.action == pytest.approx(-2 * np.pi, rel=1e-8)

    def test_single_point(self):
        result = holonomy_loop(ModelManifold.flat(), np.array([[0.3, 0.2], [0.3, 0.2]]))
        assert result.action == 0.0
        assert result.phase == 1.0

    def test_resampling_invariance(self):
        coarse = holonomy_loop(ModelManifold.flat(), oscillator_loop(1.0, 200_000)).phase
        fine = holonomy_loop(ModelManifold.flat(), oscillator_loop(1.0, 400_000)).phase
        assert abs(coarse - fine) <= 1e-8

    def test_open_loop(self):
        with pytest.raises(OpenLoopError):
            holonomy_loop(ModelManifold.flat(), np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]]))

    def test_cylinder_loop_closes_mod_two_pi(self):
        result = holonomy_loop(ModelManifold.cylinder(), cylinder_loop(3.0))
        assert result.action == pytest.approx(6 * np.pi)
        assert result.phase == pytest.approx(1.0)

    def test_no_potential_on_sphere(self):
        with pytest.raises(UnsupportedManifoldError):
            holonomy_loop(ModelManifold.sphere(1.0), oscillator_loop(1.0, 16))


class TestBohrSommerfeld:
    def test_corrected_levels(self):
        assert bohr_sommerfeld_levels(0.5, 2) == pytest.approx([0.5, 1.5, 2.5])

    def test_uncorrected_levels(self):
        assert bohr_sommerfeld_levels(0.0, 2) == pytest.approx([0.0, 1.0, 2.0])

    def test_hbar_scaling(self):
        assert bohr_sommerfeld_levels(0.5, 0, hbar=2.0) == pytest.approx([1.0])

    def test_shift_range(self):
        with pytest.raises(ValueError):
            bohr_sommerfeld_levels(1.0, 2)

    def test_levels_enclose_quantized_action(self):
        geometry = OscillatorGeometry()
        for n, energy in enumerate(bohr_sommerfeld_levels(0.5, 3, geometry)):
            assert geometry.action(energy) == pytest.approx(2 * np.pi * (n + 0.5), rel=1e-8)

    def test_energy_for_action(self):
        assert OscillatorGeometry().energy_for_action(2 * np.pi) == pytest.approx(1.0)
        assert OscillatorGeometry().energy_for_action(0.0) == 0.0

    def test_levels_follow_the_level_geometry(self):
        class SteepGeometry(OscillatorGeometry):
            action_per_energy = 4.0 * np.pi

        assert bohr_sommerfeld_levels(0.5, 2, SteepGeometry()) == pytest.approx([0.25, 0.75, 1.25])

    def test_cylinder_momenta(self):
        assert cylinder_momentum_levels(2, hbar=0.5) == pytest.approx([-1.0, -0.5, 0.0, 0.5, 1.0])
