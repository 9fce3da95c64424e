import numpy as np
import pytest

from citerank import CitationNetwork


@pytest.fixture
def three_node_net() -> CitationNetwork:
    """A -> B, C -> B, B -> C with unit weights."""
    return CitationNetwork.from_edges([("a", "b", 1), ("c", "b", 1), ("b", "c", 1)])


@pytest.fixture
def cycle3() -> CitationNetwork:
    return CitationNetwork.from_edges([("a", "b", 1), ("b", "c", 1), ("c", "a", 1)])


def make_random_network(rng: np.random.Generator, n: int, edge_prob: float = 0.2,
                        max_weight: int = 9) -> CitationNetwork:
    """Random directed network; leaves some nodes dangling by construction."""
    weights = {}
    for i in range(n):
        if rng.random() < 0.25:
            continue  # dangling node: no out-edges
        for j in range(n):
            if i != j and rng.random() < edge_prob:
                weights[(i, j)] = int(rng.integers(1, max_weight + 1))
    ids = [f"n{i:03d}" for i in range(n)]
    return CitationNetwork.build(ids, weights)
