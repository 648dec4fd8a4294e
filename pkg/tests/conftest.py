"""Shared fixtures and independent reference implementations used as oracles."""

import io
import itertools
import math

import pytest

from trajcluster import _backend
from trajcluster.corpus import Corpus, Trajectory, load_trajectories
from trajcluster.network import RoadNetwork, Segment, load_network
from trajcluster.simgraph import SimilarityGraph

HAND_NETWORK = """segment_id,from_node,to_node,length_m
s1,A,B,100
s2,B,C,100
s3,C,D,100
s4,B,E,200
"""

HAND_TRAJECTORIES = """trajectory_id,segment_ids
T1,s1;s2
T2,s1;s2;s3
T3,s1;s4
"""


@pytest.fixture
def hand_network():
    return load_network(io.StringIO(HAND_NETWORK))


@pytest.fixture
def hand_corpus(hand_network):
    return load_trajectories(io.StringIO(HAND_TRAJECTORIES), hand_network)


@pytest.fixture(params=_backend.available())
def kernels(request):
    return _backend.get(request.param)


# --- oracles ------------------------------------------------------------------
# Written from the formulas directly, sharing no code with the package.

def oracle_trajectory_weights(trajs, lengths):
    """trajs: {tid: [segment ids]}; lengths: {sid: meters}. Returns {tid: {sid: w}}."""
    n = len(trajs)
    out = {}
    for tid, segs in trajs.items():
        denom = sum(lengths[s] for s in segs)  # each occurrence counted once
        vec = {}
        for e in set(segs):
            n_et = segs.count(e)
            ssf = n_et * lengths[e] / denom
            df = sum(1 for other in trajs.values() if e in other)
            vec[e] = ssf * math.log(n / df)
        out[tid] = vec
    return out


def oracle_segment_weights(trajs, n_segments):
    """Returns {sid: {tid: w}} for every traveled segment."""
    traveled = sorted({e for segs in trajs.values() for e in segs})
    out = {}
    for e in traveled:
        total = sum(segs.count(e) for segs in trajs.values())
        vec = {}
        for tid, segs in trajs.items():
            if e in segs:
                vec[tid] = segs.count(e) / total * math.log(n_segments / len(set(segs)))
        out[e] = vec
    return out


def oracle_cosine(u, v):
    keys = set(u) | set(v)
    dot = sum(u.get(k, 0.0) * v.get(k, 0.0) for k in keys)
    nu = math.sqrt(sum(x * x for x in u.values()))
    nv = math.sqrt(sum(x * x for x in v.values()))
    if nu == 0 or nv == 0:
        return 0.0
    return dot / (nu * nv)


def oracle_modularity(n, edges, labels):
    """Double loop over ordered node pairs, i == j included with w_ii = 0."""
    W = [[0.0] * n for _ in range(n)]
    for a, b, w in edges:
        W[a][b] += w
        W[b][a] += w
    d = [sum(row) for row in W]
    two_m = sum(d)
    q = 0.0
    for i in range(n):
        for j in range(n):
            if labels[i] == labels[j]:
                q += W[i][j] - d[i] * d[j] / two_m
    return q / two_m


def set_partitions(items):
    """All set partitions of ``items`` as label lists (restricted growth strings)."""
    n = len(items)

    def grow(prefix, top):
        if len(prefix) == n:
            yield list(prefix)
            return
        for c in range(top + 2):
            yield from grow(prefix + [c], max(top, c))

    if n == 0:
        yield []
        return
    yield from grow([0], 0)


def best_modularity(n, edges):
    return max(oracle_modularity(n, edges, lab) for lab in set_partitions(range(n)))


def oracle_ari(a, b):
    keys = sorted(a)
    agree = disagree_b = both = 0
    for x, y in itertools.combinations(keys, 2):
        sa, sb = a[x] == a[y], b[x] == b[y]
        both += sa and sb
        agree += sa
        disagree_b += sb
    pairs = math.comb(len(keys), 2)
    expected = agree * disagree_b / pairs
    mx = (agree + disagree_b) / 2
    return (both - expected) / (mx - expected)


# --- graph builders for tests -------------------------------------------------

def node_names(n):
    return [f"v{i:03d}" for i in range(n)]


def graph_from_index_edges(n, edges):
    ids = node_names(n)
    return SimilarityGraph.from_weighted_edges(ids, [(ids[a], ids[b], w) for a, b, w in edges])


def random_weighted_edges(n, p, rng, unit=False):
    edges = []
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < p:
                edges.append((a, b, 1.0 if unit else float(rng.uniform(0.05, 1.0))))
    if not edges:
        edges.append((0, 1, 1.0))
    return edges


def cliques_graph(k, size, bridges=0, rng=None, bridge_weight=1.0, prefix="v"):
    """``k`` disjoint unit cliques plus ``bridges`` random inter-clique edges."""
    edges = {}
    for c in range(k):
        for i in range(size):
            for j in range(i + 1, size):
                edges[(c * size + i, c * size + j)] = 1.0
    added = 0
    while added < bridges:
        a, b = rng.choice(k, 2, replace=False)
        u = int(a * size + rng.integers(size))
        v = int(b * size + rng.integers(size))
        key = (min(u, v), max(u, v))
        if key not in edges:
            edges[key] = bridge_weight
            added += 1
    ids = [f"{prefix}{i:03d}" for i in range(k * size)]
    graph = SimilarityGraph.from_weighted_edges(ids, [(ids[a], ids[b], w) for (a, b), w in edges.items()])
    truth = {ids[i]: i // size for i in range(k * size)}
    return graph, truth


def two_triangles():
    edges = [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0), (3, 4, 1.0), (3, 5, 1.0), (4, 5, 1.0), (2, 3, 1.0)]
    return graph_from_index_edges(6, edges), edges


def random_corpus(rng, n_traj, width=5, height=5):
    """Random walks on a small grid; revisits allowed."""
    segs = []
    for y in range(height):
        for x in range(width):
            for dx, dy in ((1, 0), (0, 1)):
                if x + dx < width and y + dy < height:
                    u, v = f"{x}_{y}", f"{x + dx}_{y + dy}"
                    segs.append(Segment(f"{u}>{v}", u, v, float(rng.integers(50, 300))))
                    segs.append(Segment(f"{v}>{u}", v, u, float(rng.integers(50, 300))))
    net = RoadNetwork(segs)
    trajs = []
    for k in range(n_traj):
        node = f"{rng.integers(width)}_{rng.integers(height)}"
        path = []
        for _ in range(int(rng.integers(1, 7))):
            out = net.out_segments[node]
            sid = out[int(rng.integers(len(out)))]
            path.append(sid)
            node = net[sid].target
        trajs.append(Trajectory(f"T{k:03d}", tuple(path)))
    return Corpus(net, trajs)
