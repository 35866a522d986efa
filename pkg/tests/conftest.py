import os

# must be set before core.settings is imported anywhere
os.environ["ENVIRONMENT"] = "testing"

import numpy as np
import pytest

from models.filtration_model import GenerationalSet, Node, build_cantor, cantor_schedule


@pytest.fixture(scope="session")
def k1() -> GenerationalSet:
    return build_cantor(1)


@pytest.fixture(scope="session")
def k2() -> GenerationalSet:
    return build_cantor(2)


@pytest.fixture(scope="session")
def k3() -> GenerationalSet:
    return build_cantor(3)


@pytest.fixture(scope="session")
def k1_schedule():
    return cantor_schedule(1)


@pytest.fixture(scope="session")
def lopsided() -> GenerationalSet:
    """Root with one single-child branch and one two-child branch: not socialist."""
    return GenerationalSet(n=2, nodes=(
        Node(id=0, gen=0, parent=None, children=(1, 2)),
        Node(id=1, gen=1, parent=0, children=(3,)),
        Node(id=2, gen=1, parent=0, children=(4, 5)),
        Node(id=3, gen=2, parent=1),
        Node(id=4, gen=2, parent=2),
        Node(id=5, gen=2, parent=2),
    ))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)
