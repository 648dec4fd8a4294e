"""Average-linkage agglomerative clustering baseline and the adjusted Rand index."""

from collections import Counter
from dataclasses import dataclass
from math import comb

import numpy as np

from ._io import fmt_float
from .community.partition import Partition
from .errors import PartitionMismatchError


@dataclass(frozen=True)
class Merge:
    a: int
    b: int
    linkage: float
    new: int


@dataclass(frozen=True)
class Dendrogram:
    """Merge records over leaves ``0..leaves-1`` (indices into ``node_ids``).

    Merge ``i`` creates cluster ``leaves + i``.
    """

    merges: tuple
    leaves: int
    node_ids: tuple


def _dense(graph):
    n = len(graph)
    S = np.zeros((n, n))
    src, dst, w = graph.edge_arrays()
    S[src, dst] = w
    S[dst, src] = w
    return S


def hac_average_linkage(graph, k):
    """Merge the two clusters with the highest mean pairwise similarity until ``k`` remain.

    Pairs without an edge count as similarity 0. Ties go to the
    lexicographically smallest pair of slots.
    """
    n = len(graph)
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}], got {k}")
    sums = _dense(graph)
    sizes = np.ones(n)
    link = sums.copy()
    np.fill_diagonal(link, -np.inf)
    cid = np.arange(n)
    slot = np.arange(n)  # slot -> representative slot, for the final partition
    alive = np.ones(n, dtype=bool)
    merges = []
    for step in range(n - k):
        a, b = divmod(int(np.argmax(link)), n)
        a, b = min(a, b), max(a, b)
        merges.append(Merge(int(cid[a]), int(cid[b]), float(link[a, b]), n + step))
        sums[a, :] += sums[b, :]
        sums[:, a] = sums[a, :]
        sizes[a] += sizes[b]
        alive[b] = False
        row = np.where(alive, sums[a, :] / (sizes[a] * sizes), -np.inf)
        link[a, :] = row
        link[:, a] = row
        link[a, a] = -np.inf
        link[b, :] = -np.inf
        link[:, b] = -np.inf
        cid[a] = n + step
        slot[slot == b] = a
    part = Partition(graph.node_ids, tuple(int(x) for x in slot))
    return Dendrogram(tuple(merges), n, graph.node_ids), part


def write_dendrogram_csv(dendrogram, stream):
    """Leaf clusters are written as their entity id, merged ones as ``#<id>``."""
    def name(c):
        return str(dendrogram.node_ids[c]) if c < dendrogram.leaves else f"#{c}"

    stream.write("step,cluster_a,cluster_b,linkage,new_cluster\n")
    for i, mg in enumerate(dendrogram.merges):
        stream.write(f"{i},{name(mg.a)},{name(mg.b)},{fmt_float(mg.linkage)},#{mg.new}\n")


def _as_assignment(p):
    if isinstance(p, Partition):
        return p.assignment
    return dict(p)


def adjusted_rand_index(p, q):
    """Adjusted Rand index between two partitions of the same entity set.

    Accepts :class:`Partition` objects or entity -> label mappings. Returns
    1.0 when both partitions are identical, including the degenerate case
    where neither has any within-cluster pair.
    """
    a, b = _as_assignment(p), _as_assignment(q)
    if a.keys() != b.keys():
        only_a = sorted(map(str, a.keys() - b.keys()))[:5]
        only_b = sorted(map(str, b.keys() - a.keys()))[:5]
        raise PartitionMismatchError(
            f"partitions cover different entities (only in first: {only_a}, only in second: {only_b})")
    n = len(a)
    pairs = comb(n, 2)
    table = Counter((a[v], b[v]) for v in a)
    index = sum(comb(c, 2) for c in table.values())
    sum_a = sum(comb(c, 2) for c in Counter(a.values()).values())
    sum_b = sum(comb(c, 2) for c in Counter(b.values()).values())
    if pairs == 0:
        return 1.0
    expected = sum_a * sum_b / pairs
    best = (sum_a + sum_b) / 2
    if best == expected:
        return 1.0
    return (index - expected) / (best - expected)
