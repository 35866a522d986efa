import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from core.exceptions import ConvergenceException, DomainException
from models.filtration_model import (
    BranchingProfile,
    LeafMeasure,
    RepulsionSchedule,
    build_cantor,
    build_random_filtration,
    build_socialist,
    cantor_schedule,
)
from models.minimizer import (
    MinimizationResult,
    SolveStage,
    brute_force_minimize,
    kkt_residual,
    minimize_repulsion,
    project_to_simplex,
    projected_gradient,
    verify_equidistribution,
    verify_exchange_stability,
    verify_nondegeneracy,
)
from models.repulsion import repulsion_hierarchical


def _result(masses) -> MinimizationResult:
    return MinimizationResult(minimizer=LeafMeasure(masses=masses), min_value=1.0, iterations=0,
                              kkt_residual=0.0, active_bound_count=0, stage=SolveStage.STATIONARITY)


class TestMinimizeRepulsion:

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_cantor_minimizer_is_equidistributed(self, n):
        tree = build_cantor(n)
        result = minimize_repulsion(tree, cantor_schedule(n))
        assert result.stage == SolveStage.STATIONARITY
        assert result.min_value == pytest.approx(1 + 0.75 * n, rel=1e-8)
        np.testing.assert_allclose(result.minimizer.masses, 4.0 ** -n, rtol=1e-8)
        assert result.kkt_residual <= 1e-9
        assert result.active_bound_count == 0

    def test_minimum_grows_with_generation(self):
        values = [minimize_repulsion(build_cantor(n), cantor_schedule(n)).min_value for n in range(6)]
        assert all(later > earlier for earlier, later in zip(values, values[1:]))

    def test_minimizer_is_unique(self, k2, rng):
        schedule = cantor_schedule(2)
        result = minimize_repulsion(k2, schedule)
        for _ in range(200):
            perturbed = project_to_simplex(result.minimizer.masses + rng.normal(scale=0.01, size=16))
            if np.linalg.norm(perturbed - result.minimizer.masses) < 1e-6:
                continue
            value = repulsion_hierarchical(k2, schedule, LeafMeasure(masses=perturbed))
            assert value > result.min_value + 1e-10

    def test_single_leaf(self):
        result = minimize_repulsion(build_cantor(0), RepulsionSchedule(values=(3.0,)))
        assert result.minimizer.masses.tolist() == [1.0]
        assert result.min_value == 3.0

    def test_socialist_profile(self):
        tree = build_socialist(BranchingProfile(counts=(2, 3)))
        result = minimize_repulsion(tree, RepulsionSchedule(values=(1.0, 2.0, 5.0)))
        np.testing.assert_allclose(result.minimizer.masses, 1 / 6, rtol=1e-10)

    def test_schedule_mismatch(self, k2):
        with pytest.raises(DomainException):
            minimize_repulsion(k2, cantor_schedule(3))

    def test_kkt_residual(self, k2):
        schedule = cantor_schedule(2)
        assert kkt_residual(k2, schedule, np.full(16, 1 / 16)) == pytest.approx(0.0, abs=1e-12)
        concentrated = np.zeros(16)
        concentrated[0] = 1.0
        assert kkt_residual(k2, schedule, concentrated) > 1.0


class TestProjectedGradient:

    def test_converges_from_a_skewed_start(self, k2):
        start = np.zeros(16)
        start[:3] = (0.7, 0.2, 0.1)
        result = projected_gradient(k2, cantor_schedule(2), start)
        assert result.stage == SolveStage.PROJECTED_GRADIENT
        assert result.kkt_residual <= 1e-9
        np.testing.assert_allclose(result.minimizer.masses, 1 / 16, atol=1e-8)

    def test_gives_up_with_best_iterate(self, k2):
        start = np.zeros(16)
        start[0] = 1.0
        with pytest.raises(ConvergenceException) as error:
            projected_gradient(k2, cantor_schedule(2), start, tol=1e-300, max_iterations=1)
        best = error.value.data["best"]
        assert len(best) == 16
        assert sum(best) == pytest.approx(1.0)

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.floats(min_value=-10, max_value=10), min_size=1, max_size=30))
    def test_simplex_projection(self, values):
        values = np.asarray(values)
        projected = project_to_simplex(values)
        assert np.all(projected >= 0)
        assert np.sum(projected) == pytest.approx(1.0, abs=1e-12)
        uniform = np.full(values.size, 1.0 / values.size)
        assert np.linalg.norm(values - projected) <= np.linalg.norm(values - uniform) + 1e-9

    def test_projection_fixes_simplex_points(self):
        point = np.array([0.2, 0.0, 0.5, 0.3])
        np.testing.assert_allclose(project_to_simplex(point), point, atol=1e-15)


class TestBruteForce:

    def test_first_cantor_generation(self, k1, k1_schedule):
        result = brute_force_minimize(k1, k1_schedule, grid=50)
        assert result.stage == SolveStage.BRUTE_FORCE
        assert result.min_value == pytest.approx(1.75, abs=1e-6)
        np.testing.assert_allclose(result.minimizer.masses, 0.25, atol=1e-3)

    def test_two_leaves(self):
        tree = build_socialist(BranchingProfile(counts=(2,)))
        result = brute_force_minimize(tree, RepulsionSchedule(values=(1.0, 3.0)), grid=10)
        np.testing.assert_allclose(result.minimizer.masses, [0.5, 0.5], atol=1e-6)

    def test_agrees_with_the_solver(self):
        tree = build_socialist(BranchingProfile(counts=(2, 2)))
        schedule = RepulsionSchedule(values=(1.0, 2.0, 4.0))
        exhaustive = brute_force_minimize(tree, schedule, grid=40)
        solved = minimize_repulsion(tree, schedule)
        assert exhaustive.min_value == pytest.approx(solved.min_value, abs=1e-6)

    def test_too_many_leaves(self, k2):
        with pytest.raises(DomainException):
            brute_force_minimize(k2, cantor_schedule(2), grid=4)

    def test_grid_must_be_positive(self, k1, k1_schedule):
        with pytest.raises(DomainException):
            brute_force_minimize(k1, k1_schedule, grid=0)


class TestVerifiers:

    def test_equidistribution_on_cantor(self, k3):
        result = minimize_repulsion(k3, cantor_schedule(3))
        assert verify_equidistribution(result, k3, tol=1e-8).passed

    def test_equidistribution_names_the_worst_pair(self, k1):
        report = verify_equidistribution(_result([0.4, 0.3, 0.1, 0.2]), k1, tol=1e-8)
        assert not report.passed
        assert report.worst_generation == 1
        assert report.worst_pair == (1, 3)
        assert report.worst_ratio == pytest.approx(4.0)

    def test_equidistribution_single_square(self):
        assert verify_equidistribution(_result([1.0]), build_cantor(0), tol=1e-12).passed

    def test_equidistribution_needs_socialist_set(self, lopsided):
        with pytest.raises(DomainException):
            verify_equidistribution(_result([0.2, 0.4, 0.4]), lopsided, tol=1e-8)

    def test_nondegeneracy_on_cantor(self):
        tree = build_cantor(4)
        report = verify_nondegeneracy(minimize_repulsion(tree, cantor_schedule(4)), tol=1e-10)
        assert report.passed
        assert report.min_mass == pytest.approx(1 / 256, rel=1e-8)

    @pytest.mark.parametrize("seed", range(20))
    def test_nondegeneracy_on_random_filtrations(self, seed):
        tree = build_random_filtration(3, 4, seed=seed)
        result = minimize_repulsion(tree, cantor_schedule(3))
        assert verify_nondegeneracy(result, tol=1e-12).passed

    def test_zero_mass_is_degenerate(self):
        report = verify_nondegeneracy(_result([0.5, 0.5, 0.0, 0.0]), tol=1e-12)
        assert not report.passed
        assert report.min_leaf_index == 2

    def test_exchange_stability_at_the_minimizer(self, k2):
        schedule = cantor_schedule(2)
        report = verify_exchange_stability(minimize_repulsion(k2, schedule), k2, schedule)
        assert report.passed
        assert report.pairs_checked == 30

    def test_exchange_instability_away_from_it(self, k1, k1_schedule):
        report = verify_exchange_stability(_result([0.5, 0.25, 0.125, 0.125]), k1, k1_schedule)
        assert not report.passed
        assert report.worst_pair == (1, 3)
        assert report.max_delta == pytest.approx(3 * (0.5 - 0.125) ** 2 / 2)
