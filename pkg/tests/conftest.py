import math

import numpy as np
import pytest

from hqaco.graph_io import bundled_instance, load_sparse_graph
from hqaco.statevec import Circuit, GateOp


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def burma14():
    return bundled_instance("burma14")


@pytest.fixture(scope="session")
def gr17():
    return bundled_instance("gr17")


@pytest.fixture(scope="session")
def example7():
    return bundled_instance("example7_partial")


@pytest.fixture
def triangle():
    return load_sparse_graph("v 3\ne 0 1 1\ne 1 2 1\ne 0 2 1\n", name="triangle")


@pytest.fixture
def path3():
    return load_sparse_graph("v 3\ne 0 1 1\ne 1 2 1\n", name="path3")


def random_circuit(q, rng, depth=12):
    """Random circuit over RY, CNOT and CRY (any number of controls)."""
    gates = []
    for _ in range(depth):
        kind = rng.integers(3) if q > 1 else 0
        target = int(rng.integers(q))
        others = [i for i in range(q) if i != target]
        theta = float(rng.uniform(-2 * math.pi, 2 * math.pi))
        if kind == 0:
            gates.append(GateOp.ry(target, theta))
        elif kind == 1:
            gates.append(GateOp.cnot(int(rng.choice(others)), target))
        else:
            k = int(rng.integers(1, len(others) + 1))
            controls = [int(c) for c in rng.choice(others, size=k, replace=False)]
            gates.append(GateOp.cry(controls, target, theta))
    return Circuit(q, gates)


def random_probabilities(n, rng, zero_fraction=0.0):
    p = rng.random(n)
    if zero_fraction:
        p[rng.random(n) < zero_fraction] = 0.0
    if p.sum() == 0:
        p[rng.integers(n)] = 1.0
    return p / p.sum()
