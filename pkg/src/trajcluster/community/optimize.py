"""Multi-level modularity optimization.

Coarsening is greedy agglomeration (always take the connected cluster merge
with the largest modularity gain). The merge sequence is cut into levels,
each roughly halving the cluster count; refinement then walks back from the
coarsest level to single nodes, moving whole level-groups between clusters
whenever that raises modularity. A final polish alternates cluster merges and
node moves until neither helps, and Kernighan-Lin sweeps (tentative moves
with rollback to the best prefix) escape the local optima plain moving leaves.
Seeded Louvain-style restarts add further starting points; the best
partition wins.
"""

import numpy as np

from .. import _backend
from ..errors import UndefinedModularityError
from ..simgraph import SimilarityGraph
from .partition import Partition, canonical_labels, modularity

GAIN_TOL = 1e-13
MAX_PASSES = 10_000
MAX_POLISH_ROUNDS = 100
RESTARTS = 4
KL_ROUNDS = 50
KL_PATIENCE = 64


def _aggregate(graph, groups, n_groups):
    """Graph whose vertices are ``groups`` (node -> group index); internal weight dropped.

    Returns the aggregate graph and per-group total degree.
    """
    src, dst, w = graph.edge_arrays()
    gs, gd = groups[src], groups[dst]
    keep = gs != gd
    lo = np.minimum(gs[keep], gd[keep])
    hi = np.maximum(gs[keep], gd[keep])
    keys, inv = np.unique(lo * n_groups + hi, return_inverse=True)
    agg_w = np.bincount(inv.reshape(-1), weights=w[keep], minlength=len(keys))
    coarse = SimilarityGraph.from_edges(range(n_groups), keys // n_groups, keys % n_groups, agg_w)
    deg = np.bincount(groups, weights=graph.degrees, minlength=n_groups)
    return coarse, deg


def _apply_merges(labels, merges):
    labels = labels.copy()
    for a, b in merges:
        labels[labels == b] = a
    return labels


def _levels(n, merges):
    """Group labelings after the merge prefixes where the cluster count halved."""
    cur = np.arange(n, dtype=np.int64)
    snaps = [cur.copy()]
    count = last = n
    for a, b in merges:
        cur[cur == b] = a
        count -= 1
        if count <= last // 2:
            snaps.append(cur.copy())
            last = count
    return snaps, cur


def _refine_level(graph, groups, part, m, rng, kernels):
    """Move level-groups between clusters; returns the new node labeling."""
    groups = canonical_labels(groups)
    n_groups = int(groups.max()) + 1
    coarse, deg = _aggregate(graph, groups, n_groups)
    # every group lies inside one cluster; read its cluster from any member
    first = np.full(n_groups, -1, dtype=np.int64)
    first[groups[::-1]] = np.arange(len(groups))[::-1]
    glabels = np.ascontiguousarray(canonical_labels(part[first]), dtype=np.int64)
    order = rng.permutation(n_groups).astype(np.int64)
    kernels.refine(coarse.indptr, coarse.indices, coarse.weights, deg, m, glabels, order,
                   GAIN_TOL, MAX_PASSES)
    return glabels[groups]


def _polish(graph, part, m, rng, kernels):
    n = len(graph)
    for _ in range(MAX_POLISH_ROUNDS):
        part = canonical_labels(part)
        k = int(part.max()) + 1
        coarse, deg = _aggregate(graph, part, k)
        extra = kernels.cnm_merges(coarse.indptr, coarse.indices, coarse.weights, deg, m, GAIN_TOL)
        if len(extra) == 0:
            break
        part = _apply_merges(part, extra)
        part = _refine_level(graph, np.arange(n), part, m, rng, kernels)
    return canonical_labels(part)


def _finish(graph, part, m, rng, kernels):
    """Alternate Kernighan-Lin sweeps and polishing until KL finds nothing."""
    for _ in range(MAX_POLISH_ROUNDS):
        labels = np.ascontiguousarray(part, dtype=np.int64)
        gain = kernels.kl_refine(graph.indptr, graph.indices, graph.weights, graph.degrees, m,
                                 labels, GAIN_TOL, KL_ROUNDS, KL_PATIENCE)
        part = _polish(graph, labels, m, rng, kernels)
        if not gain > GAIN_TOL:
            break
    return part


def _agglomerative(graph, m, rng, kernels):
    merges = kernels.cnm_merges(graph.indptr, graph.indices, graph.weights, graph.degrees, m, GAIN_TOL)
    snaps, part = _levels(len(graph), merges)
    for groups in reversed(snaps):
        part = _refine_level(graph, groups, part, m, rng, kernels)
    return _finish(graph, part, m, rng, kernels)


def _local_moving(graph, m, rng, kernels):
    """Louvain-style run: move, contract, repeat; then refine back down the levels."""
    n = len(graph)
    part = np.arange(n, dtype=np.int64)
    snaps = []
    while True:
        snaps.append(part)
        new = canonical_labels(_refine_level(graph, part, part, m, rng, kernels))
        if int(new.max()) == int(canonical_labels(part).max()):
            break
        part = new
    for groups in reversed(snaps):
        part = _refine_level(graph, groups, part, m, rng, kernels)
    return _finish(graph, part, m, rng, kernels)


def _random_start(graph, m, rng, kernels, k):
    """KL from a uniformly random ``k``-way labeling."""
    part = rng.integers(0, min(k, len(graph)), size=len(graph)).astype(np.int64)
    return _finish(graph, canonical_labels(part), m, rng, kernels)


def optimize_labels(graph, seed=0, kernels=None, restarts=RESTARTS):
    """Label array (aligned with ``graph.node_ids``) of a high-modularity partition.

    Runs the agglomerative multi-level scheme once plus ``restarts`` seeded
    restarts, alternating local-moving runs and random 2/3/4-way starts, and
    keeps the best.
    """
    kernels = kernels or _backend.kernels
    if not graph.m > 0:
        raise UndefinedModularityError("cannot optimize modularity of a graph without edges")
    rng = np.random.default_rng(seed)
    m = graph.m
    best = _agglomerative(graph, m, rng, kernels)
    best_q = modularity(graph, best)
    for r in range(restarts):
        if r % 2 == 0:
            cand = _local_moving(graph, m, rng, kernels)
        else:
            cand = _random_start(graph, m, rng, kernels, 2 + (r // 2) % 3)
        q = modularity(graph, cand)
        if q > best_q + GAIN_TOL:
            best, best_q = cand, q
    return best


def optimize_partition(graph, seed=0, kernels=None, restarts=RESTARTS):
    """Return ``(Partition, Q)``; deterministic for a fixed ``seed``.

    The result is never below the single-community score of 0, and no single
    node can be moved to another existing or new cluster with a gain.
    """
    labels = optimize_labels(graph, seed, kernels, restarts)
    q = modularity(graph, labels)
    if q < 0.0:
        labels = np.zeros(len(graph), dtype=np.int64)
        q = 0.0
    return Partition(graph.node_ids, tuple(int(x) for x in labels)), q
