"""Hypothesis strategies for generational sets, schedules and leaf measures."""
import numpy as np
from hypothesis import strategies as st

from models.filtration_model import GenerationalSet, LeafMeasure, RepulsionSchedule, build_random_filtration

seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)


@st.composite
def random_sets(draw, max_n: int = 5, max_children: int = 4) -> GenerationalSet:
    n = draw(st.integers(min_value=1, max_value=max_n))
    children = draw(st.integers(min_value=1, max_value=max_children))
    return build_random_filtration(n, children, draw(seeds))


@st.composite
def schedules(draw, n: int) -> RepulsionSchedule:
    first = draw(st.floats(min_value=0.5, max_value=2.0))
    steps = draw(st.lists(st.floats(min_value=0.1, max_value=3.0), min_size=n, max_size=n))
    return RepulsionSchedule(values=tuple(np.cumsum([first, *steps]).tolist()))


def _normalized(weights: np.ndarray) -> LeafMeasure:
    return LeafMeasure(masses=weights / np.sum(weights))


@st.composite
def positive_measures(draw, leaf_count: int) -> LeafMeasure:
    rng = np.random.default_rng(draw(seeds))
    return _normalized(rng.uniform(0.05, 1.0, size=leaf_count))


@st.composite
def sparse_measures(draw, leaf_count: int) -> LeafMeasure:
    """Measures where a random subset of leaves carries no mass."""
    rng = np.random.default_rng(draw(seeds))
    weights = rng.uniform(0.0, 1.0, size=leaf_count)
    weights[rng.uniform(size=leaf_count) < 0.4] = 0.0
    if not np.any(weights):
        weights[rng.integers(leaf_count)] = 1.0
    return _normalized(weights)


@st.composite
def instances(draw, measures=positive_measures, max_n: int = 5):
    generational_set = draw(random_sets(max_n=max_n))
    return generational_set, draw(schedules(generational_set.n)), draw(measures(generational_set.leaf_count))
