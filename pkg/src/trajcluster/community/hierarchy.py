"""Recursive, significance-tested clustering into a tree of nested clusters."""

from dataclasses import dataclass, field
import json
import math

import numpy as np

from .._io import fmt_float
from .nullmodel import NullModelConfig, significance_test
from .optimize import optimize_partition
from .partition import Partition

# leaf reasons
EDGELESS = "edgeless"
SINGLE_COMMUNITY = "single_community"
NOT_SIGNIFICANT = "not_significant"
MAX_DEPTH = "max_depth"


@dataclass
class HierarchyNode:
    id: int
    path: tuple
    members: tuple
    parent: int = None
    observed_q: float = None
    significance: object = None
    leaf_reason: str = None
    children: list = field(default_factory=list)

    @property
    def depth(self):
        return len(self.path)

    @property
    def is_leaf(self):
        return not self.children

    @property
    def verdict(self):
        if self.significance is None:
            return "untested"
        return "significant" if self.significance.significant else "not_significant"


class ClusterHierarchy:
    def __init__(self, root, node_ids, config=None):
        self.root = root
        self.node_ids = tuple(node_ids)
        self.config = config
        self.nodes = []
        stack = [root]
        while stack:
            node = stack.pop()
            self.nodes.append(node)
            stack.extend(reversed(node.children))

    def leaves(self):
        return [n for n in self.nodes if n.is_leaf]

    @property
    def depth(self):
        """Number of nested partition levels below the root (0 for a lone root)."""
        return max(n.depth for n in self.leaves())

    def level_sizes(self):
        """Cluster count at each depth 1..depth (a leaf stays in deeper cuts)."""
        return [self.cut(d).k for d in range(1, self.depth + 1)]

    def cut(self, depth):
        """Flat partition: each entity gets its ancestor at ``depth`` (or its leaf if shallower)."""
        label = {}
        k = 0
        for node in self.nodes:
            if node.depth == depth or (node.is_leaf and node.depth < depth):
                for v in node.members:
                    label[v] = k
                k += 1
        return Partition.from_assignment(label, self.node_ids)

    def to_dict(self):
        def num(x):
            if x is None:
                return None
            x = float(x)
            return None if math.isnan(x) else float(fmt_float(x))

        nodes = []
        for n in self.nodes:
            sig = n.significance
            entry = {
                "id": n.id,
                "parent": n.parent,
                "path": list(n.path),
                "depth": n.depth,
                "size": len(n.members),
                "members": list(n.members),
                "observed_q": num(n.observed_q),
                "verdict": n.verdict,
                "leaf_reason": n.leaf_reason,
                "children": [c.id for c in n.children],
                "null": None,
            }
            if sig is not None:
                entry["null"] = {
                    "samples": sig.samples,
                    "mean": num(sig.null_mean),
                    "std": num(sig.null_std),
                    "threshold": num(sig.threshold),
                    "observed_q": num(sig.observed_q),
                }
            nodes.append(entry)
        cfg = self.config
        return {
            "entities": len(self.node_ids),
            "depth": self.depth,
            "level_sizes": self.level_sizes(),
            "null_model": None if cfg is None else {
                "samples": cfg.samples, "quantile": cfg.quantile, "seed": cfg.seed,
                "swap_factor": cfg.swap_factor},
            "nodes": nodes,
        }

    def to_json(self, **kwargs):
        kwargs.setdefault("indent", 1)
        return json.dumps(self.to_dict(), **kwargs)


def _key(path, tag):
    # length prefix keeps keys of different depths apart
    return (len(path),) + tuple(path) + (tag,)


def hierarchical_cluster(graph, config=None, kernels=None, max_depth=None):
    """Split recursively while the optimal partition of a cluster's induced
    subgraph is significant against the null model.

    Children are ordered by their first member in ``graph.node_ids`` order.
    """
    config = config or NullModelConfig()
    root = HierarchyNode(id=0, path=(), members=graph.node_ids)
    stack = [(root, graph)]
    while stack:
        node, sub = stack.pop()
        if sub.n_edges == 0:
            node.leaf_reason = EDGELESS
            continue
        if max_depth is not None and node.depth >= max_depth:
            node.leaf_reason = MAX_DEPTH
            continue
        seed = np.random.SeedSequence(config.seed, spawn_key=_key(node.path, 0))
        part, q = optimize_partition(sub, seed=seed, kernels=kernels)
        node.observed_q = q
        if part.k == 1:
            node.leaf_reason = SINGLE_COMMUNITY
            continue
        node.significance = significance_test(sub, q, config, key=_key(node.path, 1), kernels=kernels)
        if not node.significance.significant:
            node.leaf_reason = NOT_SIGNIFICANT
            continue
        kids = []
        for i, members in enumerate(part.clusters()):
            kids.append(HierarchyNode(id=-1, path=node.path + (i,), members=members, parent=node.id))
        node.children = kids
        for child in reversed(kids):
            stack.append((child, sub.induced_subgraph(child.members)))
    # ids are assigned in preorder once the tree is complete
    h = ClusterHierarchy(root, graph.node_ids, config)
    for i, n in enumerate(h.nodes):
        n.id = i
    for n in h.nodes:
        for c in n.children:
            c.parent = n.id
    return h
