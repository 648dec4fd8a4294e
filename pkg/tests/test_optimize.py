import numpy as np
import pytest

from trajcluster.community import Partition, modularity, optimize_partition
from trajcluster.errors import UndefinedModularityError
from trajcluster.simgraph import SimilarityGraph

from conftest import (best_modularity, cliques_graph, graph_from_index_edges,
                      random_weighted_edges, two_triangles)


def no_improving_move(graph, partition, tol=1e-12):
    """Exhaustively try every single-node move to a neighboring or new cluster."""
    labels = np.array(partition.labels)
    base = modularity(graph, labels)
    fresh = labels.max() + 1
    for i, v in enumerate(graph.node_ids):
        targets = {labels[graph.index[u]] for u in graph.neighbors(v)} | {fresh}
        for c in targets - {labels[i]}:
            trial = labels.copy()
            trial[i] = c
            if modularity(graph, trial) > base + tol:
                return False
    return True


def test_two_triangles(kernels):
    g, _ = two_triangles()
    p, q = optimize_partition(g, kernels=kernels)
    assert p.clusters() == [g.node_ids[:3], g.node_ids[3:]]
    assert q == pytest.approx(5 / 14, abs=1e-12)


def test_complete_graph_is_one_community(kernels):
    g = graph_from_index_edges(4, [(a, b, 1.0) for a in range(4) for b in range(a + 1, 4)])
    p, q = optimize_partition(g, kernels=kernels)
    assert p.k == 1 and q == 0.0


def test_single_edge(kernels):
    g = graph_from_index_edges(2, [(0, 1, 1.0)])
    p, q = optimize_partition(g, kernels=kernels)
    assert p.k == 1 and q == 0.0


def test_edgeless_raises():
    with pytest.raises(UndefinedModularityError):
        optimize_partition(SimilarityGraph.from_weighted_edges(["a", "b"], []))


@pytest.mark.parametrize("seed", range(20))
def test_matches_exhaustive_optimum(seed, kernels):
    rng = np.random.default_rng(1000 + seed)
    n = int(rng.integers(4, 9))
    edges = random_weighted_edges(n, 0.45, rng)
    g = graph_from_index_edges(n, edges)
    p, q = optimize_partition(g, seed=seed, kernels=kernels)
    assert q >= best_modularity(n, edges) - 1e-9
    assert q == pytest.approx(modularity(g, p), abs=1e-12)


@pytest.mark.parametrize("seed", range(15))
def test_local_optimality_and_floor(seed, kernels):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(5, 40))
    g = graph_from_index_edges(n, random_weighted_edges(n, float(rng.uniform(0.05, 0.5)), rng))
    p, q = optimize_partition(g, seed=seed, kernels=kernels)
    assert q >= 0.0
    assert q >= modularity(g, Partition.singletons(g.node_ids)) - 1e-12
    if p.k > 1:
        assert no_improving_move(g, p)


def test_deterministic_for_seed():
    rng = np.random.default_rng(3)
    g = graph_from_index_edges(60, random_weighted_edges(60, 0.1, rng))
    assert optimize_partition(g, seed=11) == optimize_partition(g, seed=11)


def test_recovers_cliques():
    g, truth = cliques_graph(4, 5, bridges=3, rng=np.random.default_rng(0), bridge_weight=0.05)
    p, q = optimize_partition(g)
    assert p == Partition.from_assignment(truth, g.node_ids)
    assert q > 0.7


@pytest.mark.parametrize("seed", range(10))
def test_scale_invariant_partition(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(10, 60))
    g = graph_from_index_edges(n, random_weighted_edges(n, 0.15, rng))
    a, qa = optimize_partition(g, seed=seed)
    b, qb = optimize_partition(g.scaled(7.3), seed=seed)
    assert a == b
    assert qa == pytest.approx(qb, abs=1e-9)
