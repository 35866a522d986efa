import math

import numpy as np
import pytest
from hypothesis import given, settings
from pydantic import ValidationError

from core.exceptions import DomainException, GeometryException
from models.filtration_model import (
    UNIT_SQUARE,
    BranchingProfile,
    Box,
    LeafMeasure,
    RepulsionSchedule,
    build_cantor,
    build_random_filtration,
    build_socialist,
    cantor_schedule,
    corner_placer,
    explicit_schedule,
    is_socialist,
    last_common_generation,
    last_common_generation_histogram,
    validate_even_distribution,
)
from strategies import random_sets


class TestBuildCantor:

    def test_generation_zero_is_the_unit_square(self):
        k0 = build_cantor(0)
        assert k0.total == 1
        assert k0.leaf_count == 1
        assert k0.nodes[0].box == UNIT_SQUARE
        assert k0.nodes[0].children == ()

    def test_first_generation_corners(self, k1):
        assert k1.total == 5
        leaves = k1.boxes[k1.leaf_offset:]
        expected = [(1 / 8, 1 / 8), (7 / 8, 1 / 8), (1 / 8, 7 / 8), (7 / 8, 7 / 8)]
        np.testing.assert_allclose(leaves[:, :2], expected, atol=1e-15)
        np.testing.assert_allclose(2 * leaves[:, 2], 0.25)

    def test_third_generation_counts(self, k3):
        assert k3.total == 1 + 4 + 16 + 64
        assert k3.leaf_count == 64
        np.testing.assert_allclose(2 * k3.boxes[k3.leaf_offset:, 2], 4.0 ** -3)

    @pytest.mark.parametrize("n", [-1, 11])
    def test_out_of_range(self, n):
        with pytest.raises(DomainException):
            build_cantor(n)

    def test_ancestors_are_breadth_first(self, k2):
        assert k2.ancestors[0].tolist() == [0] * 16
        assert k2.ancestors[1].tolist() == [1] * 4 + [2] * 4 + [3] * 4 + [4] * 4
        assert k2.ancestors[2].tolist() == list(range(5, 21))


class TestBuildSocialist:

    def test_profile_two_three(self):
        tree = build_socialist(BranchingProfile(counts=(2, 3)))
        assert tree.total == 9
        assert tree.leaf_count == 6
        assert not tree.has_geometry

    def test_four_four_matches_cantor_tree(self, k2):
        tree = build_socialist(BranchingProfile(counts=(4, 4)))
        np.testing.assert_array_equal(tree.parents, k2.parents)

    def test_corner_placer_reproduces_cantor(self, k1):
        tree = build_socialist(BranchingProfile(counts=(4,)), placer=corner_placer)
        np.testing.assert_array_equal(tree.boxes, k1.boxes)

    def test_empty_profile(self):
        with pytest.raises(DomainException):
            build_socialist(BranchingProfile(counts=()))

    def test_overlapping_siblings_name_the_pair(self):
        def stacked(parent: Box, index: int, count: int, generation: int) -> Box:
            return Box(cx=parent.cx, cy=parent.cy, hw=parent.hw / 2)

        with pytest.raises(GeometryException) as error:
            build_socialist(BranchingProfile(counts=(2,)), placer=stacked)
        assert error.value.data["pair"] == [1, 2]

    def test_escaping_child_names_the_pair(self):
        def escaping(parent: Box, index: int, count: int, generation: int) -> Box:
            return Box(cx=parent.cx + 2 * index * parent.hw, cy=parent.cy, hw=parent.hw / 2)

        with pytest.raises(GeometryException) as error:
            build_socialist(BranchingProfile(counts=(2,)), placer=escaping)
        assert error.value.data["pair"] == [0, 2]

    def test_profile_parse(self):
        assert BranchingProfile.parse("2, 3").counts == (2, 3)
        with pytest.raises(DomainException):
            BranchingProfile.parse("2,x")


class TestBuildRandomFiltration:

    def test_single_child_chain(self):
        chain = build_random_filtration(1, 1, seed=123)
        assert chain.total == 2
        assert chain.leaf_count == 1

    def test_same_seed_same_tree(self):
        first = build_random_filtration(4, 3, seed=11)
        second = build_random_filtration(4, 3, seed=11)
        np.testing.assert_array_equal(first.parents, second.parents)

    def test_leaf_count_recount(self):
        tree = build_random_filtration(3, 4, seed=7)

        def leaves_below(node_id: int) -> int:
            node = tree.nodes[node_id]
            return 1 if not node.children else sum(leaves_below(child) for child in node.children)

        assert leaves_below(0) == tree.leaf_count
        assert all(1 <= len(node.children) <= 4 for node in tree.nodes if node.gen < tree.n)

    @settings(max_examples=50, deadline=None)
    @given(random_sets())
    def test_generations_are_contiguous_blocks(self, tree):
        offsets = tree.generation_offsets
        for generation in range(tree.n + 1):
            block = tree.generations[offsets[generation]:offsets[generation + 1]]
            assert np.all(block == generation)
        assert tree.leaf_count == tree.generation_size(tree.n)


class TestLastCommonGeneration:

    def test_same_leaf_is_n(self, k2):
        assert last_common_generation(k2, 5, 5) == 2

    def test_siblings(self, k2):
        assert last_common_generation(k2, 5, 6) == 1

    def test_different_first_generation_squares(self, k2):
        assert last_common_generation(k2, 5, 20) == 0

    def test_non_leaf(self, k2):
        with pytest.raises(DomainException):
            last_common_generation(k2, 1, 5)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_histogram_on_cantor(self, n):
        tree = build_cantor(n)
        counts = last_common_generation_histogram(tree, tree.leaf_offset)
        assert counts == [3 * 4 ** (n - level - 1) for level in range(n)] + [1]


class TestSchedulesAndMeasures:

    def test_cantor_schedule(self):
        assert cantor_schedule(3).values == (1.0, 4.0, 16.0, 64.0)

    def test_explicit_schedule(self):
        assert explicit_schedule("1, 4,16").values == (1.0, 4.0, 16.0)

    def test_non_increasing_schedule_rejected(self):
        with pytest.raises(ValidationError):
            explicit_schedule("4,1")

    def test_unparseable_schedule(self):
        with pytest.raises(DomainException):
            explicit_schedule("1,four")

    def test_schedule_length_mismatch(self, k2):
        with pytest.raises(DomainException):
            RepulsionSchedule(values=(1.0, 2.0)).require_fits(k2)

    @pytest.mark.parametrize("masses", [[0.5, 0.6], [1.5, -0.5], []])
    def test_measure_must_be_a_probability_vector(self, masses):
        with pytest.raises(ValidationError):
            LeafMeasure(masses=masses)

    def test_measure_is_read_only(self):
        mu = LeafMeasure(masses=[0.25, 0.75])
        with pytest.raises(ValueError):
            mu.masses[0] = 1.0

    def test_is_socialist(self, k2, lopsided):
        assert is_socialist(k2).counts == (4, 4)
        assert is_socialist(lopsided) is None


class TestEvenDistribution:

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_cantor_passes(self, n):
        report = validate_even_distribution(build_cantor(n), cantor_schedule(n), C=2.0, eps=0.5)
        assert report.passed

    def test_slow_schedule_fails_diameter_clause(self):
        tree = build_cantor(3)
        schedule = RepulsionSchedule(values=tuple(2.0 ** k for k in range(4)))
        report = validate_even_distribution(tree, schedule, C=2.0, eps=0.5)
        assert not report.diameter_clause_passed
        assert report.worst_diameter.generation == 3
        assert math.isclose(report.worst_diameter.value, 4 ** 3 / math.sqrt(2))

    def test_single_square_passes_vacuously(self):
        report = validate_even_distribution(build_cantor(0), RepulsionSchedule(values=(1.0,)), C=2.0, eps=0.5)
        assert report.passed
        assert report.worst_separation is None

    def test_separation_offender(self, k1):
        report = validate_even_distribution(k1, cantor_schedule(1), C=2.0, eps=3.0)
        assert not report.separation_clause_passed
        assert report.worst_separation.generation == 1
        assert math.isclose(report.worst_separation.value, 0.5)

    def test_missing_geometry(self):
        with pytest.raises(DomainException):
            validate_even_distribution(build_random_filtration(2, 2, seed=1), cantor_schedule(2), C=2.0, eps=0.5)
