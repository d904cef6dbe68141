import random

import pytest

from flowkit.network import build_network
from oracles import random_network_spec


@pytest.fixture
def g1():
    """Four-vertex network whose incidence matrix is the 4x5 fixture."""
    return build_network(4, 1, 4, [(1, 2, 3), (1, 3, 2), (2, 4, 2), (3, 4, 3), (2, 3, 1)])


@pytest.fixture
def single_arc():
    return build_network(2, 1, 2, [(1, 2, 5)])


def make_random_network(rng, max_n=8, max_cap=10, allow_st_arc=True):
    n, s, t, arcs = random_network_spec(rng, max_n=max_n, max_cap=max_cap,
                                        allow_st_arc=allow_st_arc)
    return build_network(n, s, t, arcs), arcs


@pytest.fixture
def rng():
    return random.Random(1729)
