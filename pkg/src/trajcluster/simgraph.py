"""Undirected weighted similarity graphs over trajectories or road segments."""

from itertools import combinations
from xml.sax.saxutils import escape, quoteattr
import math

import numpy as np

from . import _backend
from ._io import fmt_float
from .network import are_connected
from .vectorizer import cosine, segment_vector, trajectory_vector

# similarities at or below this are floating-point dust, not edges
SIM_EPS = 1e-12

TRAJECTORY = "trajectory"
SEGMENT = "segment"
LOOSE = "loose"
STRICT = "strict"


class SimilarityGraph:
    """Immutable CSR adjacency over ``node_ids``.

    Neighbor lists are sorted by node index. ``degrees[i]`` is the weighted
    degree and ``m`` half their sum (total edge weight).
    """

    def __init__(self, node_ids, indptr, indices, weights):
        self.node_ids = tuple(node_ids)
        self.index = {v: i for i, v in enumerate(self.node_ids)}
        if len(self.index) != len(self.node_ids):
            raise ValueError("duplicate node ids")
        self.indptr = np.ascontiguousarray(indptr, dtype=np.int64)
        self.indices = np.ascontiguousarray(indices, dtype=np.int64)
        self.weights = np.ascontiguousarray(weights, dtype=np.float64)
        for a in (self.indptr, self.indices, self.weights):
            a.flags.writeable = False
        n = len(self.node_ids)
        rows = np.repeat(np.arange(n), np.diff(self.indptr))
        self.degrees = np.bincount(rows, weights=self.weights, minlength=n).astype(np.float64)
        self.degrees.flags.writeable = False
        self.m = float(self.degrees.sum()) / 2.0

    @classmethod
    def from_edges(cls, node_ids, src, dst, weights):
        """Build from index arrays of undirected edges (each listed once)."""
        node_ids = tuple(node_ids)
        n = len(node_ids)
        src = np.asarray(src, dtype=np.int64)
        dst = np.asarray(dst, dtype=np.int64)
        w = np.asarray(weights, dtype=np.float64)
        if np.any(src == dst):
            raise ValueError("self-loops are not allowed")
        if np.any(w <= 0):
            raise ValueError("edge weights must be positive")
        rows = np.concatenate([src, dst])
        cols = np.concatenate([dst, src])
        vals = np.concatenate([w, w])
        order = np.lexsort((cols, rows))
        rows, cols, vals = rows[order], cols[order], vals[order]
        if len(rows) > 1 and np.any((rows[1:] == rows[:-1]) & (cols[1:] == cols[:-1])):
            raise ValueError("parallel edges are not allowed")
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
        return cls(node_ids, indptr, cols, vals)

    @classmethod
    def from_weighted_edges(cls, node_ids, edges):
        """Build from ``(id_a, id_b, weight)`` triples."""
        node_ids = tuple(node_ids)
        index = {v: i for i, v in enumerate(node_ids)}
        triples = [(index[a], index[b], w) for a, b, w in edges]
        if not triples:
            return cls.from_edges(node_ids, [], [], [])
        s, d, w = zip(*triples)
        return cls.from_edges(node_ids, s, d, w)

    def __len__(self):
        return len(self.node_ids)

    @property
    def n_edges(self):
        return int(len(self.indices) // 2)

    def edge_arrays(self):
        """``(src, dst, weight)`` index arrays with ``src < dst``, lexicographically sorted."""
        n = len(self.node_ids)
        rows = np.repeat(np.arange(n, dtype=np.int64), np.diff(self.indptr))
        keep = rows < self.indices
        return rows[keep], self.indices[keep], self.weights[keep]

    def edges(self):
        """Iterate ``(id_a, id_b, weight)`` once per undirected edge."""
        ids = self.node_ids
        for i, j, w in zip(*self.edge_arrays()):
            yield ids[i], ids[j], float(w)

    def edge_dict(self):
        return {(a, b): w for a, b, w in self.edges()}

    def neighbors(self, node):
        i = self.index[node]
        lo, hi = self.indptr[i], self.indptr[i + 1]
        return {self.node_ids[j]: float(w) for j, w in zip(self.indices[lo:hi], self.weights[lo:hi])}

    def weight(self, a, b):
        return self.neighbors(a).get(b, 0.0)

    def degree(self, node):
        return float(self.degrees[self.index[node]])

    def scaled(self, c):
        return SimilarityGraph(self.node_ids, self.indptr, self.indices, self.weights * c)

    def induced_subgraph(self, members):
        return induced_subgraph(self, members)

    def __eq__(self, other):
        if not isinstance(other, SimilarityGraph):
            return NotImplemented
        return (self.node_ids == other.node_ids
                and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices)
                and np.array_equal(self.weights, other.weights))

    def __repr__(self):
        return f"SimilarityGraph(nodes={len(self)}, edges={self.n_edges}, m={self.m:.6g})"


def induced_subgraph(graph, members):
    """Subgraph on ``members`` keeping only edges with both endpoints inside.

    Node order follows the parent graph.
    """
    members = set(members)
    unknown = members.difference(graph.index)
    if unknown:
        raise KeyError(f"unknown node ids: {sorted(map(str, unknown))[:5]}")
    keep = np.array([v in members for v in graph.node_ids], dtype=bool)
    new_index = np.full(len(graph), -1, dtype=np.int64)
    new_index[keep] = np.arange(int(keep.sum()))
    src, dst, w = graph.edge_arrays()
    sel = keep[src] & keep[dst]
    ids = [v for v, k in zip(graph.node_ids, keep) if k]
    return SimilarityGraph.from_edges(ids, new_index[src[sel]], new_index[dst[sel]], w[sel])


# --- feature matrices ---------------------------------------------------------

def _entity_vectors(corpus, kind):
    if kind == TRAJECTORY:
        ids = sorted(corpus.trajectories)
        return ids, [trajectory_vector(corpus, t) for t in ids]
    if kind == SEGMENT:
        ids = corpus.traveled_segments()
        return ids, [segment_vector(corpus, e) for e in ids]
    raise ValueError(f"unknown entity kind {kind!r}")


def _csr(ids, vectors):
    """Entity-by-feature CSR and its transpose, features sorted by id."""
    feats = sorted({f for v in vectors for f in v.entries})
    fidx = {f: k for k, f in enumerate(feats)}
    ent_ptr = [0]
    ent_feat, ent_w = [], []
    for v in vectors:
        row = sorted((fidx[f], w) for f, w in v.entries.items())
        ent_feat.extend(k for k, _ in row)
        ent_w.extend(w for _, w in row)
        ent_ptr.append(len(ent_feat))
    ent_ptr = np.asarray(ent_ptr, dtype=np.int64)
    ent_feat = np.asarray(ent_feat, dtype=np.int64)
    ent_w = np.asarray(ent_w, dtype=np.float64)
    rows = np.repeat(np.arange(len(ids), dtype=np.int64), np.diff(ent_ptr))
    order = np.lexsort((rows, ent_feat))
    feat_ent = rows[order]
    feat_w = ent_w[order]
    feat_ptr = np.zeros(len(feats) + 1, dtype=np.int64)
    np.cumsum(np.bincount(ent_feat, minlength=len(feats)), out=feat_ptr[1:])
    return ent_ptr, ent_feat, ent_w, feat_ptr, feat_ent, feat_w


def _shared_pairs(corpus, kind, kernels=None):
    kernels = kernels or _backend.kernels
    ids, vectors = _entity_vectors(corpus, kind)
    arrays = _csr(ids, vectors)
    i, j, dots = kernels.pair_dots(*arrays)
    return ids, vectors, i, j, dots


def candidate_pairs(corpus, kind):
    """Yield each unordered entity-id pair sharing at least one feature, once.

    Uses an inverted index, so cost scales with co-occurrences rather than n^2.
    """
    ids, _, i, j, _ = _shared_pairs(corpus, kind)
    for a, b in zip(i.tolist(), j.tolist()):
        yield ids[a], ids[b]


def _graph_from_pairs(ids, vectors, i, j, dots):
    norms = np.array([math.sqrt(sum(w * w for w in v.entries.values())) for v in vectors])
    denom = norms[i] * norms[j]
    with np.errstate(divide="ignore", invalid="ignore"):
        sims = np.where(denom > 0, dots / np.where(denom > 0, denom, 1.0), 0.0)
    sims = np.minimum(sims, 1.0)
    keep = sims > SIM_EPS
    return SimilarityGraph.from_edges(ids, i[keep], j[keep], sims[keep])


def build_trajectory_graph(corpus, kernels=None):
    """One node per trajectory; an edge wherever cosine similarity is positive."""
    return _graph_from_pairs(*_shared_pairs(corpus, TRAJECTORY, kernels))


def build_segment_graph(corpus, mode=LOOSE, kernels=None):
    """One node per traveled segment.

    ``loose``: edge wherever cosine similarity is positive. ``strict``: such
    edges are kept only between segments sharing an endpoint node.
    """
    if mode not in (LOOSE, STRICT):
        raise ValueError(f"unknown mode {mode!r}; expected 'loose' or 'strict'")
    ids, vectors, i, j, dots = _shared_pairs(corpus, SEGMENT, kernels)
    if mode == STRICT:
        net = corpus.network
        adjacent = np.array([are_connected(net[ids[a]], net[ids[b]])
                             for a, b in zip(i.tolist(), j.tolist())], dtype=bool)
        i, j, dots = i[adjacent], j[adjacent], dots[adjacent]
    return _graph_from_pairs(ids, vectors, i, j, dots)


def build_graph_naive(corpus, kind, mode=LOOSE):
    """All-pairs construction without the inverted index (reference path)."""
    ids, vectors = _entity_vectors(corpus, kind)
    edges = []
    for (a, va), (b, vb) in combinations(zip(ids, vectors), 2):
        if kind == SEGMENT and mode == STRICT and not are_connected(corpus.network[a], corpus.network[b]):
            continue
        s = min(cosine(va, vb), 1.0)
        if s > SIM_EPS:
            edges.append((a, b, s))
    return SimilarityGraph.from_weighted_edges(ids, edges)


# --- export -------------------------------------------------------------------

def write_edge_csv(graph, stream):
    stream.write("node_a,node_b,weight\n")
    for a, b, w in graph.edges():
        stream.write(f"{a},{b},{fmt_float(w)}\n")


def write_graphml(graph, stream, attrs=None):
    """GraphML for external viewers (Gephi, Cytoscape, yEd).

    ``attrs`` optionally maps node id to a dict of extra string attributes.
    """
    attrs = attrs or {}
    keys = sorted({k for d in attrs.values() for k in d})
    stream.write('<?xml version="1.0" encoding="UTF-8"?>\n')
    stream.write('<graphml xmlns="http://graphml.graphdrawing.org/xmlns">\n')
    stream.write('  <key id="weight" for="edge" attr.name="weight" attr.type="double"/>\n')
    for k in keys:
        stream.write(f'  <key id={quoteattr(k)} for="node" attr.name={quoteattr(k)} attr.type="string"/>\n')
    stream.write('  <graph id="similarity" edgedefault="undirected">\n')
    for v in graph.node_ids:
        extra = attrs.get(v, {})
        if extra:
            stream.write(f"    <node id={quoteattr(str(v))}>\n")
            for k in keys:
                if k in extra:
                    stream.write(f"      <data key={quoteattr(k)}>{escape(str(extra[k]))}</data>\n")
            stream.write("    </node>\n")
        else:
            stream.write(f"    <node id={quoteattr(str(v))}/>\n")
    for a, b, w in graph.edges():
        stream.write(f"    <edge source={quoteattr(str(a))} target={quoteattr(str(b))}>"
                     f'<data key="weight">{fmt_float(w)}</data></edge>\n')
    stream.write("  </graph>\n</graphml>\n")
