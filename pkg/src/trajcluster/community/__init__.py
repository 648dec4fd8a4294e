"""Modularity-based community detection with a recursive significance test."""

from .hierarchy import ClusterHierarchy, HierarchyNode, hierarchical_cluster
from .nullmodel import NullModelConfig, SignificanceResult, randomized_graph, significance_test
from .optimize import optimize_partition
from .partition import Partition, modularity
from ..simgraph import induced_subgraph

__all__ = [
    "ClusterHierarchy", "HierarchyNode", "NullModelConfig", "Partition", "SignificanceResult",
    "hierarchical_cluster", "induced_subgraph", "modularity", "optimize_partition",
    "randomized_graph", "significance_test",
]
