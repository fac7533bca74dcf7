import numpy as np
import pytest

from sedmap import fixtures
from sedmap.mapcore import Factor, FactorKind, WeightedEdge, build_map


@pytest.fixture
def chain():
    return fixtures.chain_map()


@pytest.fixture
def two_cycle():
    return build_map(
        [Factor("a"), Factor("b")],
        [WeightedEdge("a", "b", 0.8), WeightedEdge("b", "a", 0.9)],
    )


@pytest.fixture
def self_loop():
    return build_map([Factor("a")], [WeightedEdge("a", "a", 1.0)])


@pytest.fixture
def edgeless():
    return build_map([Factor("a"), Factor("b"), Factor("c")])


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
