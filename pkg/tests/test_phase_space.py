import numpy as np
import pytest

from engine.errors import DimensionMismatchError, FlowBlowupError, UnsupportedManifoldError
from engine.phase_space import (
    HamiltonianFlow,
    bracket_field_defect,
    hamiltonian_vector_field,
    lagrangian_of,
    moment_map_defect,
    moment_map_s1,
    poisson_bracket,
    random_polynomial,
)
from models.manifold import ModelManifold
from models.observable import Observable

FLAT = ModelManifold.flat()


def obs(expr, n=1):
    return Observable.from_expr(expr, n=n)


class TestHamiltonianVectorField:
    def test_momentum_generates_translation_in_q(self):
        np.testing.assert_allclose(hamiltonian_vector_field(FLAT, obs("p"), [0.0, 0.0]), [1.0, 0.0])

    def test_oscillator_field(self):
        field = hamiltonian_vector_field(FLAT, obs("(p**2 + q**2)/2"), [1.0, 2.0])
        np.testing.assert_allclose(field, [2.0, -1.0])

    def test_constant_has_zero_field(self):
        np.testing.assert_allclose(hamiltonian_vector_field(FLAT, obs("7"), [0.3, -1.2]), [0.0, 0.0])

    def test_sphere_has_no_darboux_chart(self):
        with pytest.raises(UnsupportedManifoldError):
            hamiltonian_vector_field(ModelManifold.sphere(1.0), obs("q"), [0.0, 0.0])

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            hamiltonian_vector_field(FLAT, obs("q1*p2", n=2), [0.0, 0.0])


class TestPoissonBracket:
    def test_canonical_pair(self):
        assert poisson_bracket(obs("q"), obs("p")) == 1

    def test_antisymmetry(self):
        f = obs("q**3*p")
        assert poisson_bracket(f, f).is_zero

    def test_oscillator_with_position(self):
        assert poisson_bracket(obs("(p**2 + q**2)/2"), obs("q")) == obs("-p")

    def test_mismatched_dimensions(self):
        with pytest.raises(DimensionMismatchError):
            poisson_bracket(obs("q"), obs("q1", n=2))

    @pytest.mark.parametrize("n", [1, 2])
    def test_jacobi_identity(self, rng, n):
        for _ in range(3):
            f, g, h = (random_polynomial(rng, n=n, max_degree=3) for _ in range(3))
            total = (poisson_bracket(f, poisson_bracket(g, h))
                     + poisson_bracket(g, poisson_bracket(h, f))
                     + poisson_bracket(h, poisson_bracket(f, g)))
            assert total.is_zero

    def test_bracket_matches_symplectic_pairing_of_fields(self, rng):
        f = random_polynomial(rng, n=1, max_degree=3)
        g = random_polynomial(rng, n=1, max_degree=3)
        points = rng.uniform(-1.0, 1.0, size=(100, 2))
        assert bracket_field_defect(f, g, points) <= 1e-10


class TestLagrangian:
    def test_free_particle(self):
        assert lagrangian_of(obs("p**2/2")) == obs("p**2/2")

    def test_position(self):
        assert lagrangian_of(obs("q")) == obs("-q")

    def test_zero(self):
        assert lagrangian_of(obs("0")).is_zero


class TestHamiltonianFlow:
    def test_free_particle_action(self):
        action = HamiltonianFlow().generating_action(FLAT, obs("p**2/2"), [0.0, 1.0], 1.0)
        assert action.value == pytest.approx(-0.5, abs=1e-10)
        np.testing.assert_allclose(action.final_point, [1.0, 1.0], atol=1e-10)

    def test_zero_hamiltonian(self):
        action = HamiltonianFlow().generating_action(FLAT, obs("0"), [0.4, -0.3], 2.0)
        assert action.value == 0.0

    def test_oscillator_quarter_period(self):
        H = Observable.from_complex("z*zbar/2")
        t = np.pi / 4
        action = HamiltonianFlow().generating_action(FLAT, H, [1.0, 0.0], t)
        assert action.value == pytest.approx(np.sin(2 * t) / 4, abs=1e-9)
        assert action.error_estimate < 1e-9

    def test_oscillator_full_period_closes(self):
        H = obs("(p**2 + q**2)/2")
        action = HamiltonianFlow().generating_action(FLAT, H, [1.0, 0.0], 2 * np.pi)
        assert action.value == pytest.approx(0.0, abs=1e-9)
        np.testing.assert_allclose(action.final_point, [1.0, 0.0], atol=1e-9)

    def test_energy_conserved(self):
        drift = HamiltonianFlow().energy_drift(FLAT, obs("(p**2 + q**2)/2"), [1.0, 0.5], 2 * np.pi)
        assert drift <= 1e-8

    def test_trajectory_shape(self):
        path = HamiltonianFlow(steps=64).trajectory(FLAT, obs("p"), [0.0, 0.0], 1.0)
        assert path.shape == (65, 2)
        assert path[-1, 0] == pytest.approx(1.0)

    def test_blowup(self):
        # q' = q² from q = 1 blows up at t = 1
        flow = HamiltonianFlow(steps=256, blowup_bound=1e3)
        with pytest.raises(FlowBlowupError):
            flow.generating_action(FLAT, obs("q**2*p"), [1.0, 1.0], 2.0)

    def test_too_few_steps(self):
        with pytest.raises(ValueError):
            HamiltonianFlow().generating_action(FLAT, obs("p"), [0.0, 0.0], 1.0, steps=4)

    def test_cylinder_is_supported(self):
        action = HamiltonianFlow().generating_action(ModelManifold.cylinder(), obs("p**2/2"), [0.0, 2.0], 0.5)
        assert action.value == pytest.approx(-1.0, abs=1e-10)


class TestMomentMap:
    def test_single_weight(self):
        assert moment_map_s1((1,), [1.0, 1.0]) == pytest.approx(-1.0)

    def test_origin(self):
        assert moment_map_s1((1,), [0.0, 0.0]) == 0.0

    def test_two_weights(self):
        assert moment_map_s1((2, 3), [1.0, 0.0, 0.0, 1.0]) == pytest.approx(-2.5)

    def test_weight_count_must_match(self):
        with pytest.raises(DimensionMismatchError):
            moment_map_s1((1, 2), [1.0, 1.0])

    def test_defining_identity(self, rng):
        points = rng.uniform(-2.0, 2.0, size=(100, 4))
        worst = max(moment_map_defect((2, -1), point, step=1e-5) for point in points)
        assert worst <= 1e-6
