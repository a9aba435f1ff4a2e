import itertools
import math

import numpy as np
import pytest
from hypothesis import strategies as st

from gsselect import _jit, check_feasible, make_instance

# product-domain counterpart of the 1e-9 log-margin tolerance
REL_TOL = math.exp(1e-9)


def brute_force(costs, probs, threshold):
    """Min-cost feasible z by plain enumeration in the probability domain.

    Returns (cost, z) with ties going to the lexicographically smallest z,
    or (None, None) if nothing is feasible.
    """
    best = (None, None)
    for z in itertools.product((0, 1), repeat=len(costs)):
        outage = math.prod(p for p, zk in zip(probs, z) if zk)
        if outage <= threshold * REL_TOL:
            cost = sum(c for c, zk in zip(costs, z) if zk)
            if best[0] is None or cost < best[0]:
                best = (cost, z)
    return best


def brute_force_R(costs, a, i, j):
    """Best margin over subsets of the first i sites with cost exactly j."""
    best = -math.inf
    for z in itertools.product((0, 1), repeat=i):
        if sum(c for c, zk in zip(costs[:i], z) if zk) == j:
            best = max(best, sum(x for x, zk in zip(a[:i], z) if zk))
    return best


def random_instance(rng, k_max=12, cost_max=9, thresholds=(0.5, 0.1, 0.01, None)):
    """Feasible random instance; a None threshold means the product of all p."""
    while True:
        K = int(rng.integers(1, k_max + 1))
        costs = [int(c) for c in rng.integers(1, cost_max + 1, K)]
        probs = [float(p) for p in rng.uniform(0.25, 0.75, K)]
        th = thresholds[int(rng.integers(len(thresholds)))]
        if th is None:
            th = math.prod(probs)
        inst = make_instance(costs, probs, th)
        if check_feasible(inst):
            return inst


@st.composite
def instances(draw, k_max=10, cost_max=9, feasible=True):
    K = draw(st.integers(1, k_max))
    costs = draw(st.lists(st.integers(1, cost_max), min_size=K, max_size=K))
    probs = draw(st.lists(st.floats(0.05, 1.0), min_size=K, max_size=K))
    if feasible:
        lo = math.prod(probs)
        frac = draw(st.floats(0.0, 1.0))
        threshold = lo ** (1.0 - frac) if lo > 0 else 1.0
        threshold = min(1.0, max(threshold, lo))
    else:
        threshold = draw(st.floats(1e-6, 1.0))
    if threshold <= 0:
        threshold = 1.0
    return make_instance(costs, probs, threshold)


@pytest.fixture(params=["numba", "numpy"])
def backend(request, monkeypatch):
    if request.param == "numba" and not _jit.HAVE_NUMBA:
        pytest.skip("numba not installed")
    monkeypatch.setattr(_jit, "USE_NUMBA", request.param == "numba")
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
