"""Cluster network-constrained trajectories and road segments.

Entities are weighted by segment frequency and inverse trajectory frequency,
linked by cosine similarity, and split recursively by modularity while each
split beats a randomized null model.
"""

__version__ = "0.1.0"

from . import _backend
from .baseline import Dendrogram, Merge, adjusted_rand_index, hac_average_linkage
from .community import (ClusterHierarchy, HierarchyNode, NullModelConfig, Partition,
                        SignificanceResult, hierarchical_cluster, modularity,
                        optimize_partition, significance_test)
from .corpus import Corpus, Trajectory, load_trajectories
from .errors import (FormatError, NetworkFormatError, PartitionMismatchError,
                     TrajectoryFormatError, TrajclusterError, UndefinedModularityError,
                     UndefinedWeightError)
from .network import RoadNetwork, Segment, are_connected, load_network
from .simgraph import (LOOSE, SEGMENT, STRICT, TRAJECTORY, SimilarityGraph,
                       build_segment_graph, build_trajectory_graph)
from .vectorizer import cosine, itf, segment_vector, segment_weight, ssf, trajectory_vector

BACKEND = _backend.BACKEND

__all__ = [
    "BACKEND", "ClusterHierarchy", "Corpus", "Dendrogram", "FormatError", "HierarchyNode",
    "LOOSE", "Merge", "NetworkFormatError", "NullModelConfig", "Partition",
    "PartitionMismatchError", "RoadNetwork", "SEGMENT", "STRICT", "Segment",
    "SignificanceResult", "SimilarityGraph", "TRAJECTORY", "Trajectory", "TrajclusterError",
    "TrajectoryFormatError", "UndefinedModularityError", "UndefinedWeightError",
    "adjusted_rand_index", "are_connected", "build_segment_graph", "build_trajectory_graph",
    "cosine", "hac_average_linkage", "hierarchical_cluster", "itf", "load_network",
    "load_trajectories", "modularity", "optimize_partition", "segment_vector",
    "segment_weight", "significance_test", "ssf", "trajectory_vector",
]
