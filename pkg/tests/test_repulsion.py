import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from core.exceptions import DomainException
from models.filtration_model import (
    LeafMeasure,
    RepulsionSchedule,
    build_cantor,
    cantor_schedule,
    equidistributed_measure,
    point_mass,
)
from models.repulsion import (
    apply_gram,
    delta_q_exchange,
    delta_q_socialist,
    delta_q_transfer,
    generation_mass_squares,
    gram_matrix,
    mass_exchange,
    mass_transfer,
    potential,
    potentials,
    repulsion_hierarchical,
    repulsion_naive,
)
from strategies import instances, sparse_measures


class TestEvaluators:

    def test_first_cantor_generation(self, k1, k1_schedule):
        mu = equidistributed_measure(k1)
        assert math.isclose(repulsion_naive(k1, k1_schedule, mu), 1.75, rel_tol=1e-14)
        assert math.isclose(repulsion_hierarchical(k1, k1_schedule, mu), 1.75, rel_tol=1e-14)

    def test_single_leaf(self):
        assert repulsion_hierarchical(build_cantor(0), RepulsionSchedule(values=(2.5,)), LeafMeasure(masses=[1.0])) == 2.5

    def test_point_mass_gives_last_value(self, k2):
        schedule = cantor_schedule(2)
        mu = point_mass(k2, 7)
        assert repulsion_naive(k2, schedule, mu) == 16.0
        assert repulsion_hierarchical(k2, schedule, mu) == 16.0
        assert generation_mass_squares(k2, mu).T == (1.0, 1.0, 1.0)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_equidistributed_cantor(self, n):
        tree = build_cantor(n)
        mu = equidistributed_measure(tree)
        squares = generation_mass_squares(tree, mu).T
        np.testing.assert_allclose(squares, [4.0 ** -level for level in range(n + 1)], rtol=1e-13)
        expected = 1 + 0.75 * n
        assert math.isclose(repulsion_hierarchical(tree, cantor_schedule(n), mu), expected, rel_tol=1e-12)
        assert math.isclose(repulsion_naive(tree, cantor_schedule(n), mu), expected, rel_tol=1e-12)

    @settings(max_examples=200, deadline=None)
    @given(st.one_of(instances(), instances(measures=sparse_measures)))
    def test_hierarchical_matches_naive(self, instance):
        tree, schedule, mu = instance
        naive = repulsion_naive(tree, schedule, mu)
        hierarchical = repulsion_hierarchical(tree, schedule, mu)
        assert math.isclose(naive, hierarchical, rel_tol=1e-10)
        assert generation_mass_squares(tree, mu).T[0] == pytest.approx(1.0, abs=1e-12)

    @settings(max_examples=200, deadline=None)
    @given(st.one_of(instances(), instances(measures=sparse_measures)))
    def test_value_lies_between_first_and_last_schedule_values(self, instance):
        tree, schedule, mu = instance
        value = repulsion_hierarchical(tree, schedule, mu)
        assert schedule.values[0] * (1 - 1e-12) <= value <= schedule.values[-1] * (1 + 1e-12)

    @settings(max_examples=200, deadline=None)
    @given(st.one_of(instances(), instances(measures=sparse_measures)))
    def test_mass_squares_shrink_with_generation(self, instance):
        tree, _, mu = instance
        squares = np.asarray(generation_mass_squares(tree, mu).T)
        assert np.all(squares > 0)
        assert np.all(squares <= 1 + 1e-12)
        assert np.all(np.diff(squares) <= 1e-12)

    def test_naive_does_not_depend_on_threads(self, k3, rng):
        mu = LeafMeasure(masses=rng.dirichlet(np.ones(k3.leaf_count)))
        schedule = cantor_schedule(3)
        assert repulsion_naive(k3, schedule, mu, threads=1) == repulsion_naive(k3, schedule, mu, threads=4)

    def test_dimension_mismatch(self, k2, k1):
        with pytest.raises(DomainException):
            repulsion_naive(k2, cantor_schedule(2), equidistributed_measure(k1))


class TestPotentials:

    def test_point_mass_at_itself(self, k2):
        assert potential(k2, cantor_schedule(2), point_mass(k2, 9), 9) == 16.0

    def test_first_cantor_generation(self, k1, k1_schedule):
        mu = equidistributed_measure(k1)
        for leaf in range(k1.leaf_offset, k1.total):
            assert math.isclose(potential(k1, k1_schedule, mu, leaf), 1.75)

    @settings(max_examples=50, deadline=None)
    @given(instances(max_n=4))
    def test_potentials_reassemble_repulsion(self, instance):
        tree, schedule, mu = instance
        field = potentials(tree, schedule, mu)
        assert math.isclose(float(mu.masses @ field), repulsion_hierarchical(tree, schedule, mu), rel_tol=1e-10)
        np.testing.assert_allclose(field, gram_matrix(tree, schedule) @ mu.masses, rtol=1e-12)

    def test_single_potential_matches_vector(self, k3, rng):
        mu = LeafMeasure(masses=rng.dirichlet(np.ones(k3.leaf_count)))
        schedule = cantor_schedule(3)
        field = potentials(k3, schedule, mu)
        for leaf in (k3.leaf_offset, k3.leaf_offset + 17, k3.total - 1):
            assert math.isclose(potential(k3, schedule, mu, leaf), field[leaf - k3.leaf_offset], rel_tol=1e-12)

    def test_non_leaf(self, k2):
        with pytest.raises(DomainException):
            potential(k2, cantor_schedule(2), equidistributed_measure(k2), 3)

    def test_apply_gram_shape(self, k2):
        with pytest.raises(DomainException):
            apply_gram(k2, cantor_schedule(2), np.ones(3))


class TestMassExchange:

    def test_first_generation_example(self, k1, k1_schedule):
        mu = LeafMeasure(masses=[0.5, 0.25, 0.125, 0.125])
        exchanged = mass_exchange(mu, k1, 1, 2)
        np.testing.assert_allclose(exchanged.masses, [0.375, 0.375, 0.125, 0.125], rtol=1e-15)
        assert math.isclose(delta_q_exchange(k1, k1_schedule, mu, 1, 2), 0.09375, rel_tol=1e-14)
        direct = repulsion_hierarchical(k1, k1_schedule, mu) - repulsion_hierarchical(k1, k1_schedule, exchanged)
        assert math.isclose(direct, 0.09375, rel_tol=1e-12)

    def test_equal_masses_are_unchanged(self, k1, k1_schedule):
        mu = LeafMeasure(masses=[0.3, 0.3, 0.1, 0.3])
        np.testing.assert_allclose(mass_exchange(mu, k1, 1, 2).masses, mu.masses, rtol=1e-15)
        assert delta_q_exchange(k1, k1_schedule, mu, 1, 2) == pytest.approx(0.0, abs=1e-15)

    def test_non_siblings(self, k2):
        with pytest.raises(DomainException):
            mass_exchange(equidistributed_measure(k2), k2, 1, 5)

    def test_same_node(self, k2):
        with pytest.raises(DomainException):
            mass_exchange(equidistributed_measure(k2), k2, 1, 1)

    def test_zero_mass(self, k1):
        with pytest.raises(DomainException):
            mass_exchange(LeafMeasure(masses=[0.5, 0.0, 0.25, 0.25]), k1, 1, 2)

    @settings(max_examples=100, deadline=None)
    @given(instances(), st.data())
    def test_closed_form_matches_direct(self, instance, data):
        tree, schedule, mu = instance
        parents = [node for node in tree.nodes if len(node.children) >= 2]
        assume(parents)
        parent = data.draw(st.sampled_from(parents))
        a, b = data.draw(st.permutations(parent.children))[:2]

        exchanged = mass_exchange(mu, tree, a, b)
        assert math.isclose(float(np.sum(exchanged.masses)), 1.0, abs_tol=1e-12)
        direct = repulsion_hierarchical(tree, schedule, mu) - repulsion_hierarchical(tree, schedule, exchanged)
        assert delta_q_exchange(tree, schedule, mu, a, b) == pytest.approx(direct, abs=1e-12)

    def test_socialist_form_for_equidistributed_blocks(self, k2):
        schedule = RepulsionSchedule(values=(1.0, 3.0, 10.0))
        masses = np.concatenate([np.full(4, 0.4 / 4), np.full(4, 0.1 / 4), np.full(8, 0.5 / 8)])
        mu = LeafMeasure(masses=masses)
        expected = 0.5 * (0.4 - 0.1) ** 2 * (2.0 / 1 + 7.0 / 4)
        assert delta_q_socialist(k2, schedule, mu, 1, 2) == pytest.approx(expected, rel=1e-12)
        assert delta_q_exchange(k2, schedule, mu, 1, 2) == pytest.approx(expected, rel=1e-12)

    def test_socialist_form_needs_socialist_set(self, lopsided):
        mu = LeafMeasure(masses=[0.2, 0.5, 0.3])
        with pytest.raises(DomainException):
            delta_q_socialist(lopsided, RepulsionSchedule(values=(1.0, 2.0, 3.0)), mu, 4, 5)


class TestMassTransfer:

    @pytest.fixture
    def transfer_measure(self, k2) -> LeafMeasure:
        masses = np.zeros(16)
        masses[1], masses[2] = 0.3, 0.1
        masses[4:] = 0.6 / 12
        return LeafMeasure(masses=masses)

    def test_transfer_halves_the_source(self, k2, transfer_measure):
        moved = mass_transfer(transfer_measure, k2, 5, 6)
        assert moved.masses[0] == moved.masses[1] == 0.15
        assert math.isclose(float(np.sum(moved.masses)), 1.0, abs_tol=1e-12)

    @pytest.mark.parametrize("source", [6, 7])
    def test_closed_form_and_bound(self, k2, transfer_measure, source):
        schedule = cantor_schedule(2)
        moved = mass_transfer(transfer_measure, k2, 5, source)
        direct = repulsion_hierarchical(k2, schedule, transfer_measure) - repulsion_hierarchical(k2, schedule, moved)
        result = delta_q_transfer(k2, schedule, transfer_measure, 5, source)
        assert result.k == 1
        assert result.delta == pytest.approx(direct, abs=1e-12)
        assert result.lower_bound > 0
        assert result.delta >= result.lower_bound - 1e-12

    def test_empty_branch_uses_root_generation(self, k2):
        schedule = RepulsionSchedule(values=(1.0, 2.0, 5.0))
        masses = np.zeros(16)
        masses[4:] = 1.0 / 12
        mu = LeafMeasure(masses=masses)
        moved = mass_transfer(mu, k2, 5, 13)
        result = delta_q_transfer(k2, schedule, mu, 5, 13)
        assert result.k == 0
        direct = repulsion_hierarchical(k2, schedule, mu) - repulsion_hierarchical(k2, schedule, moved)
        assert result.delta == pytest.approx(direct, abs=1e-12)
        assert result.lower_bound > 0
        assert result.delta >= result.lower_bound - 1e-12

    def test_target_must_be_empty(self, k2, transfer_measure):
        with pytest.raises(DomainException):
            mass_transfer(transfer_measure, k2, 6, 7)

    def test_source_outside_the_positive_ancestor(self, k2, transfer_measure):
        with pytest.raises(DomainException):
            delta_q_transfer(k2, cantor_schedule(2), transfer_measure, 5, 12)
