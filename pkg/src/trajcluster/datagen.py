"""Seeded grid road networks and trajectory corpora with planted groups.

Each group travels the shortest path between its corridor endpoints. At every
hop a trajectory may independently side-step: instead of ``u -> v`` it goes
``u -> a -> b -> v`` around an adjacent block, which perturbs it without
losing the group's shared segments.
"""

from collections import Counter
from dataclasses import dataclass, field
import heapq
import os

import numpy as np

from ._io import data_lines, open_text
from .corpus import Corpus, Trajectory, write_trajectories
from .errors import FormatError
from .network import RoadNetwork, Segment, write_network

TRUTH_HEADER = ("trajectory_id", "group_label")
GROUPS_HEADER = ("origin", "destination", "count", "detour")


@dataclass(frozen=True)
class GroupSpec:
    origin: str
    destination: str
    count: int
    detour: float = 0.0

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("group trajectory count must be >= 1")
        if not 0.0 <= self.detour < 1.0:
            raise ValueError("detour probability must lie in [0, 1)")


@dataclass(frozen=True)
class GenerationSpec:
    width: int
    height: int
    length_base: float = 100.0
    jitter: float = 0.1
    groups: tuple = field(default=())
    seed: int = 0

    def __post_init__(self):
        if self.width < 2 or self.height < 2:
            raise ValueError("grid width and height must be >= 2")
        if not self.length_base > 0:
            raise ValueError("length_base must be positive")
        if not 0.0 <= self.jitter < 1.0:
            raise ValueError("jitter must lie in [0, 1)")
        object.__setattr__(self, "groups", tuple(self.groups))


def node_id(x, y):
    return f"n{x}_{y}"


def segment_id(u, v):
    return f"{u}-{v}"


def generate_network(spec):
    """Grid with both directed segments per adjacency; jittered lengths."""
    rng = np.random.default_rng(np.random.SeedSequence(spec.seed, spawn_key=(0,)))
    pairs = []
    for y in range(spec.height):
        for x in range(spec.width):
            u = node_id(x, y)
            if x + 1 < spec.width:
                pairs.append((u, node_id(x + 1, y)))
            if y + 1 < spec.height:
                pairs.append((u, node_id(x, y + 1)))
    segments = []
    for u, v in pairs:
        for a, b in ((u, v), (v, u)):
            f = rng.uniform(-spec.jitter, spec.jitter) if spec.jitter > 0 else 0.0
            length = round(spec.length_base * (1.0 + f), 3)
            segments.append(Segment(segment_id(a, b), a, b, length))
    return RoadNetwork(segments)


def corridor_groups(width, height, n_groups=3, count=20, detour=0.2):
    """Horizontal west-to-east corridors on evenly spaced rows.

    Rows are at least three apart when ``height >= 3 * n_groups``, so the
    corridors and their side-steps never share a segment.
    """
    if n_groups < 1 or n_groups > height:
        raise ValueError("need 1 <= n_groups <= height")
    rows = [int((k + 0.5) * height / n_groups) for k in range(n_groups)]
    return tuple(GroupSpec(node_id(0, r), node_id(width - 1, r), count, detour) for r in rows)


def shortest_path(network, origin, destination):
    """Segment ids of a length-shortest path; equal-length ties favor smaller node ids."""
    if origin not in network.nodes or destination not in network.nodes:
        raise ValueError(f"corridor endpoint not in network: {origin!r} -> {destination!r}")
    dist = {origin: 0.0}
    pred = {}
    heap = [(0.0, origin)]
    done = set()
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        if u == destination:
            break
        for sid in network.out_segments.get(u, ()):
            seg = network[sid]
            nd = d + seg.length
            if nd < dist.get(seg.target, float("inf")):
                dist[seg.target] = nd
                pred[seg.target] = sid
                heapq.heappush(heap, (nd, seg.target))
    if destination not in done:
        raise ValueError(f"destination {destination!r} unreachable from {origin!r}")
    path = []
    v = destination
    while v != origin:
        sid = pred[v]
        path.append(sid)
        v = network[sid].source
    return path[::-1]


def side_steps(network, sid):
    """Three-segment detours ``u->a->b->v`` replacing segment ``u->v``, sorted."""
    seg = network[sid]
    u, v = seg.source, seg.target
    into_v = {}
    for s in network.segments.values():
        if s.target == v and s.source not in (u, v):
            into_v[s.source] = s.id
    out = []
    for s1 in network.out_segments.get(u, ()):
        a = network[s1].target
        if a in (u, v):
            continue
        for s2 in network.out_segments.get(a, ()):
            b = network[s2].target
            if b in (u, v, a) or b not in into_v:
                continue
            out.append((s1, s2, into_v[b]))
    return sorted(out)


def generate_corpus(spec, network):
    """Return ``(corpus, labels)`` where labels maps trajectory id to group index."""
    rng = np.random.default_rng(np.random.SeedSequence(spec.seed, spawn_key=(1,)))
    trajectories = []
    labels = {}
    steps_cache = {}
    k = 0
    for g, group in enumerate(spec.groups):
        path = shortest_path(network, group.origin, group.destination)
        for _ in range(group.count):
            segs = []
            for sid in path:
                if group.detour > 0 and rng.random() < group.detour:
                    if sid not in steps_cache:
                        steps_cache[sid] = side_steps(network, sid)
                    options = steps_cache[sid]
                    if options:
                        segs.extend(options[int(rng.integers(len(options)))])
                        continue
                segs.append(sid)
            k += 1
            tid = f"T{k:04d}"
            trajectories.append(Trajectory(tid, tuple(segs)))
            labels[tid] = g
    return Corpus(network, trajectories), labels


def segment_truth(corpus, labels):
    """Label each traveled segment with the group contributing most of its occurrences."""
    votes = {}
    for t in corpus:
        for e, c in corpus.counts[t.id].items():
            votes.setdefault(e, Counter())[labels[t.id]] += c
    return {e: min(v.items(), key=lambda kv: (-kv[1], kv[0]))[0] for e, v in sorted(votes.items())}


def write_truth(labels, stream, header=TRUTH_HEADER):
    stream.write(",".join(header) + "\n")
    for tid, g in labels.items():
        stream.write(f"{tid},{g}\n")


def export_corpus(corpus, labels, destination):
    """Write ``network.csv``, ``trajectories.csv`` and ``truth.csv``; return their paths."""
    os.makedirs(destination, exist_ok=True)
    paths = {name: os.path.join(destination, f"{name}.csv")
             for name in ("network", "trajectories", "truth")}
    with open(paths["network"], "w", encoding="utf-8", newline="") as fh:
        write_network(corpus.network, fh)
    with open(paths["trajectories"], "w", encoding="utf-8", newline="") as fh:
        write_trajectories(corpus, fh)
    with open(paths["truth"], "w", encoding="utf-8", newline="") as fh:
        write_truth(labels, fh)
    return paths


def load_groups(source):
    """Parse a group spec CSV: ``origin,destination,count,detour``."""
    stream, name, close = open_text(source)
    try:
        groups = []
        header_seen = False
        for lineno, line in data_lines(stream):
            cols = [c.strip() for c in line.split(",")]
            if not header_seen:
                header_seen = True
                if tuple(cols) == GROUPS_HEADER:
                    continue
            if len(cols) != 4:
                raise FormatError(f"expected 4 columns, got {len(cols)}", lineno, name)
            try:
                groups.append(GroupSpec(cols[0], cols[1], int(cols[2]), float(cols[3])))
            except ValueError as exc:
                raise FormatError(str(exc), lineno, name) from None
    finally:
        if close:
            stream.close()
    return tuple(groups)


def load_labels(source, header=None):
    """Read a two-column ``entity,label`` CSV into a dict (labels kept as strings)."""
    stream, name, close = open_text(source)
    try:
        out = {}
        first = True
        for lineno, line in data_lines(stream):
            cols = [c.strip() for c in line.split(",")]
            if first:
                first = False
                if header is None or tuple(cols) == tuple(header):
                    continue
            if len(cols) != 2:
                raise FormatError(f"expected 2 columns, got {len(cols)}", lineno, name)
            if cols[0] in out:
                raise FormatError(f"duplicate entity {cols[0]!r}", lineno, name)
            out[cols[0]] = cols[1]
    finally:
        if close:
            stream.close()
    return out
