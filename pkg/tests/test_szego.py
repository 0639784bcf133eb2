import numpy as np
import pytest

from engine.errors import IllConditionedFitError
from engine.szego import (
    DEFAULT_LADDER,
    ExpansionFitter,
    default_points,
    fit_expansion,
    kernel_diagonal,
    ladder_table,
    monomial_norms_p1,
    trace_integral,
)
from models.results import KernelModel

POINTS = default_points(10, 2.0)


class TestMonomialNorms:
    def test_first_power_is_symmetric(self):
        norms = monomial_norms_p1(1)
        assert norms == pytest.approx([np.pi / 2, np.pi / 2])

    def test_beta_value(self):
        # π B(2, 2) = π / 6
        assert monomial_norms_p1(2)[1] == pytest.approx(np.pi / 6, rel=1e-8)

    @pytest.mark.parametrize("k", [3, 8, 17, 64])
    def test_reflection_symmetry(self, k):
        norms = np.array(monomial_norms_p1(k))
        np.testing.assert_allclose(norms, norms[::-1], rtol=1e-10)

    def test_power_range(self):
        with pytest.raises(ValueError):
            monomial_norms_p1(0)


class TestKernelDiagonal:
    @pytest.mark.parametrize("k", [1, 8, 64])
    def test_bargmann_plane(self, k):
        diagonal = kernel_diagonal(KernelModel.BARGMANN_PLANE, k, POINTS)
        np.testing.assert_allclose(diagonal.values, k / np.pi, rtol=1e-9)

    def test_projective_line_is_homogeneous(self):
        diagonal = kernel_diagonal("projective-line", 8, POINTS)
        assert diagonal.homogeneity_defect <= 1e-6
        assert diagonal.mean == pytest.approx(9 / np.pi, rel=1e-10)

    def test_projective_line_increases_with_k(self):
        means = [kernel_diagonal(KernelModel.PROJECTIVE_LINE, k, [0.3 + 0.1j]).mean for k in DEFAULT_LADDER]
        assert np.all(np.diff(means) > 0)

    def test_far_points(self):
        diagonal = kernel_diagonal(KernelModel.PROJECTIVE_LINE, 32, [50.0, -1e3j])
        np.testing.assert_allclose(diagonal.values, 33 / np.pi, rtol=1e-10)

    @pytest.mark.parametrize("k", DEFAULT_LADDER)
    def test_trace_is_section_count(self, k):
        assert trace_integral(k) == pytest.approx(k + 1, rel=1e-6)

    def test_unknown_model(self):
        with pytest.raises(ValueError):
            kernel_diagonal("torus", 4, POINTS)


class TestExpansionFit:
    def test_projective_line(self):
        diagonals = [kernel_diagonal(KernelModel.PROJECTIVE_LINE, k, POINTS) for k in DEFAULT_LADDER]
        fit = fit_expansion(diagonals)
        assert fit.n_hat == pytest.approx(1.0, abs=0.02)
        assert fit.normalized_a0 == pytest.approx(1.0, abs=0.02)
        # Π_k = (k + 1)/π, so the subleading term matches the leading one
        assert fit.normalized_a1 == pytest.approx(1.0, abs=1e-6)

    def test_bargmann_plane_is_linear(self):
        diagonals = [kernel_diagonal(KernelModel.BARGMANN_PLANE, k, POINTS) for k in DEFAULT_LADDER]
        fit = ExpansionFitter().fit_diagonals(diagonals)
        assert fit.normalization == 1.0
        assert fit.n_hat == pytest.approx(1.0, abs=1e-6)
        assert np.pi * fit.a0 == pytest.approx(1.0, abs=1e-8)
        assert np.pi * fit.a1 == pytest.approx(0.0, abs=1e-8)

    def test_reference_fit_is_the_bargmann_slope(self):
        reference = ExpansionFitter().reference_fit(DEFAULT_LADDER, POINTS)
        assert reference.a0 == pytest.approx(1.0 / np.pi, abs=1e-9)
        assert reference.normalized_a0 == reference.a0

    def test_projective_line_normalized_by_reference(self):
        fitter = ExpansionFitter()
        reference = fitter.reference_fit(DEFAULT_LADDER, POINTS)
        diagonals = [kernel_diagonal(KernelModel.PROJECTIVE_LINE, k, POINTS) for k in DEFAULT_LADDER]
        fit = fitter.fit_diagonals(diagonals, reference)
        assert fit.normalization == reference.a0
        assert fit.normalized_a0 == pytest.approx(1.0, abs=0.02)
        assert fit_expansion(diagonals, fitter).normalized_a0 == pytest.approx(fit.normalized_a0, rel=1e-12)

    def test_reference_fit_needs_a_ladder(self):
        with pytest.raises(ValueError):
            ExpansionFitter().reference_fit([8, 16], POINTS)

    def test_constant_ladder(self):
        fit = ExpansionFitter().fit_expansion(DEFAULT_LADDER, [2.5] * len(DEFAULT_LADDER))
        assert fit.n_hat == pytest.approx(0.0, abs=1e-8)
        assert fit.a0 == pytest.approx(2.5)

    def test_short_ladder(self):
        with pytest.raises(ValueError):
            ExpansionFitter(min_ladder=6).fit_expansion([8, 16, 32], [1.0, 2.0, 4.0])

    def test_noisy_ladder_is_ill_conditioned(self):
        values = [1.0, 5.0, 1.0, 5.0, 1.0, 5.0, 1.0]
        with pytest.raises(IllConditionedFitError):
            ExpansionFitter().fit_expansion(DEFAULT_LADDER, values)

    def test_non_positive_values(self):
        with pytest.raises(ValueError):
            ExpansionFitter().fit_expansion(DEFAULT_LADDER, [0.0] * len(DEFAULT_LADDER))


def test_ladder_table_columns():
    table = ladder_table(KernelModel.BARGMANN_PLANE, (8, 16))
    assert list(table.columns) == ['k', 'value']
    np.testing.assert_allclose(table['value'], [8 / np.pi, 16 / np.pi])
