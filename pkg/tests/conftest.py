import numpy as np
import pytest
from click.testing import CliRunner

from hermclust.schemas.params import DsbmParams
from hermclust.services.dsbm import sample_dsbm2
from hermclust.services.graph import Labeling, build_graph


@pytest.fixture
def three_edges():
    """0->2, 1->3, 0->1: two cross edges from {0,1} into {2,3} and one inside."""
    return build_graph(4, [(0, 2), (1, 3), (0, 1)])


@pytest.fixture
def halves():
    return Labeling(np.array([0, 0, 1, 1]), 2)


@pytest.fixture
def strong_dsbm():
    """200 vertices, p = q = 0.15, nearly every cross edge points 0 -> 1."""
    params = DsbmParams(sizes=[100, 100], p=0.15, q=0.15, eta=0.05)
    return sample_dsbm2(params, seed=3)


@pytest.fixture
def rng():
    return np.random.default_rng(42)


@pytest.fixture
def runner():
    return CliRunner()
