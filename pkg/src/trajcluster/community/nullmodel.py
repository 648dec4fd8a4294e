"""Randomized reference graphs and the significance test for a partition."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .. import _backend
from ..simgraph import SimilarityGraph
from .optimize import optimize_partition


@dataclass(frozen=True)
class NullModelConfig:
    samples: int = 30
    quantile: float = 0.95
    seed: int = 0
    swap_factor: int = 10

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if not 0.0 < self.quantile < 1.0:
            raise ValueError("quantile must lie in (0, 1)")
        if self.swap_factor < 0:
            raise ValueError("swap_factor must be >= 0")


@dataclass(frozen=True)
class SignificanceResult:
    significant: bool
    observed_q: float
    null_qs: tuple = field(default=())
    threshold: float = float("nan")

    @property
    def samples(self):
        return len(self.null_qs)

    @property
    def null_mean(self):
        return float(np.mean(self.null_qs)) if self.null_qs else float("nan")

    @property
    def null_std(self):
        return float(np.std(self.null_qs)) if self.null_qs else float("nan")

    def to_dict(self):
        return {
            "significant": self.significant,
            "observed_q": self.observed_q,
            "samples": self.samples,
            "null_mean": self.null_mean,
            "null_std": self.null_std,
            "threshold": self.threshold,
        }


def randomized_graph(graph, rng, swap_factor=10, kernels=None):
    """Rewire ``graph`` by double-edge swaps and shuffle its weights.

    Node degrees (edge counts) are kept; the multiset of edge weights is
    kept but randomly reassigned to the rewired edges.
    """
    kernels = kernels or _backend.kernels
    src, dst, w = graph.edge_arrays()
    src, dst = src.copy(), dst.copy()
    n_e = len(src)
    attempts = swap_factor * n_e
    if n_e >= 2 and attempts > 0:
        pick_i = rng.integers(0, n_e, size=attempts, dtype=np.int64)
        pick_j = rng.integers(0, n_e, size=attempts, dtype=np.int64)
        flip = rng.integers(0, 2, size=attempts, dtype=np.int8)
        kernels.rewire(src, dst, len(graph), pick_i, pick_j, flip)
    return SimilarityGraph.from_edges(graph.node_ids, src, dst, rng.permutation(w))


def _sample_seed(config, key, r):
    return np.random.SeedSequence(config.seed, spawn_key=tuple(key) + (r,))


def null_modularity(graph, config, key, r, kernels=None):
    """Optimized modularity of the ``r``-th randomized copy of ``graph``."""
    rng = np.random.default_rng(_sample_seed(config, key, r))
    null = randomized_graph(graph, rng, config.swap_factor, kernels)
    return optimize_partition(null, seed=rng, kernels=kernels)[1]


def significance_test(graph, observed_q, config=None, key=(), kernels=None):
    """Is ``observed_q`` above the ``config.quantile`` quantile of null optima?

    ``key`` namespaces the sample seeds so distinct tests under one master
    seed draw independent streams. Graphs with fewer than two edges cannot be
    rewired and are never significant.
    """
    config = config or NullModelConfig()
    if graph.n_edges < 2:
        return SignificanceResult(False, float(observed_q))
    threads = min(_backend.thread_count(), config.samples)

    def run(r):
        return null_modularity(graph, config, key, r, kernels)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            qs = list(pool.map(run, range(config.samples)))
    else:
        qs = [run(r) for r in range(config.samples)]
    threshold = float(np.quantile(qs, config.quantile))
    return SignificanceResult(bool(observed_q > threshold), float(observed_q), tuple(qs), threshold)
