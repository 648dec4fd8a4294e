"""Partitions of graph nodes and their modularity."""

from dataclasses import dataclass

import numpy as np

from ..errors import UndefinedModularityError


def canonical_labels(labels):
    """Relabel to 0..K-1 in order of first appearance."""
    labels = np.asarray(labels)
    _, first, inv = np.unique(labels, return_index=True, return_inverse=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first, kind="stable")] = np.arange(len(first))
    return rank[inv.reshape(-1)]


@dataclass(frozen=True)
class Partition:
    """Assignment of each node id to a cluster label in ``0..k-1``.

    Labels are canonical: clusters are numbered by their first member in
    ``node_ids`` order, so equal groupings compare equal.
    """

    node_ids: tuple
    labels: tuple

    def __post_init__(self):
        if len(self.node_ids) != len(self.labels):
            raise ValueError("node_ids and labels differ in length")
        canon = tuple(int(x) for x in canonical_labels(self.labels)) if self.labels else ()
        object.__setattr__(self, "node_ids", tuple(self.node_ids))
        object.__setattr__(self, "labels", canon)

    @classmethod
    def from_assignment(cls, assignment, node_ids=None):
        if node_ids is None:
            node_ids = list(assignment)
        return cls(tuple(node_ids), tuple(assignment[v] for v in node_ids))

    @classmethod
    def from_clusters(cls, clusters, node_ids=None):
        assignment = {v: k for k, members in enumerate(clusters) for v in members}
        return cls.from_assignment(assignment, node_ids)

    @classmethod
    def single(cls, node_ids):
        return cls(tuple(node_ids), (0,) * len(node_ids))

    @classmethod
    def singletons(cls, node_ids):
        return cls(tuple(node_ids), tuple(range(len(node_ids))))

    @property
    def k(self):
        return max(self.labels) + 1 if self.labels else 0

    @property
    def assignment(self):
        return dict(zip(self.node_ids, self.labels))

    def clusters(self):
        """Member tuples, ordered by label."""
        out = [[] for _ in range(self.k)]
        for v, c in zip(self.node_ids, self.labels):
            out[c].append(v)
        return [tuple(c) for c in out]

    def sizes(self):
        return np.bincount(np.asarray(self.labels, dtype=np.int64), minlength=self.k)

    def aligned(self, node_ids):
        """Label array in the order of ``node_ids`` (must be the same set)."""
        a = self.assignment
        if len(node_ids) != len(a) or any(v not in a for v in node_ids):
            raise ValueError("partition does not cover the requested node set")
        return np.array([a[v] for v in node_ids], dtype=np.int64)


def _labels_for(graph, partition):
    if isinstance(partition, Partition):
        return partition.aligned(graph.node_ids)
    if isinstance(partition, dict):
        missing = [v for v in graph.node_ids if v not in partition]
        if missing:
            raise ValueError(f"partition misses {len(missing)} graph nodes, e.g. {missing[:3]}")
        return Partition.from_assignment(partition, graph.node_ids).aligned(graph.node_ids)
    labels = np.asarray(partition, dtype=np.int64)
    if labels.shape != (len(graph),):
        raise ValueError("label array must have one entry per graph node")
    return labels


def modularity(graph, partition):
    """Modularity of a partition of a weighted undirected graph.

    Sums over ordered node pairs within each cluster, diagonal included with
    zero self-weight, so the single-cluster partition scores exactly 0.
    ``partition`` may be a :class:`Partition`, a node-id dict, or a label array
    aligned with ``graph.node_ids``.
    """
    two_m = float(graph.degrees.sum())
    if not two_m > 0:
        raise UndefinedModularityError("modularity is undefined for a graph without edges")
    labels = canonical_labels(_labels_for(graph, partition))
    src, dst, w = graph.edge_arrays()
    internal = float(w[labels[src] == labels[dst]].sum())
    tot = np.bincount(labels, weights=graph.degrees)
    return 2.0 * internal / two_m - float(np.sum((tot / two_m) ** 2))
