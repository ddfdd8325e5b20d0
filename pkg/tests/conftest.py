import logging

import numpy as np
import pytest

from greennet.generators import random_attachment, random_network
from greennet.selfcheck import green_of, path_network, penrose_residuals, single_vertex_network, triangle_network

LAMBDAS_POSITIVE = (0.3, 1.0, 2.0)

P2_GREEN = 0.25 * np.array([[1.0, -1.0], [-1.0, 1.0]])
K3_GREEN = (3.0 * np.eye(3) - np.ones((3, 3))) / 9.0


@pytest.fixture
def p2():
    return path_network()


@pytest.fixture
def k3():
    return triangle_network()


@pytest.fixture
def single():
    return single_vertex_network()


@pytest.fixture
def make_case():
    """seed, lam -> (spec, G, attachment) on a random connected network with 2..8 vertices"""

    def build(seed, lam=0.0, random_weight=False, n=None, m=None):
        rng = np.random.default_rng(seed)
        size = int(rng.integers(2, 9)) if n is None else n
        spec = random_network(size, rng, extra_edge_prob=0.3, lam=lam, random_weight=random_weight)
        return spec, green_of(spec), random_attachment(spec, rng, m=m)

    return build


@pytest.fixture
def restore_logging():
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)


def assert_penrose(m, x, atol=1e-9):
    residuals = penrose_residuals(m, x)
    assert max(residuals) <= atol * max(1.0, float(np.max(np.abs(m)))), residuals
