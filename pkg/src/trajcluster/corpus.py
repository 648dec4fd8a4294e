"""Network-constrained trajectories and the corpus-level counts both weightings use."""

from collections import Counter
from dataclasses import dataclass
from types import MappingProxyType

from ._io import data_lines, open_text
from .errors import TrajectoryFormatError

TRAJECTORY_HEADER = ("trajectory_id", "segment_ids")


@dataclass(frozen=True)
class Trajectory:
    id: str
    segments: tuple


class Corpus:
    """A validated, immutable set of trajectories over one road network.

    Precomputed statistics:

    * ``counts[t]``: Counter of segment occurrences in trajectory ``t``
    * ``df[e]``: number of distinct trajectories containing ``e``
    * ``totals[e]``: occurrences of ``e`` summed over all trajectories
    * ``distinct[t]``: number of distinct segments in ``t``
    """

    def __init__(self, network, trajectories):
        self.network = network
        trajs = {}
        for t in trajectories:
            if t.id in trajs:
                raise ValueError(f"duplicate trajectory id {t.id!r}")
            validate_trajectory(t, network)
            trajs[t.id] = t
        self._trajectories = MappingProxyType(trajs)

        counts = {}
        df = Counter()
        totals = Counter()
        for tid, t in trajs.items():
            c = Counter(t.segments)
            counts[tid] = MappingProxyType(dict(c))
            for e, k in c.items():
                df[e] += 1
                totals[e] += k
        self.counts = MappingProxyType(counts)
        self.df = MappingProxyType(dict(df))
        self.totals = MappingProxyType(dict(totals))
        self.distinct = MappingProxyType({tid: len(c) for tid, c in counts.items()})
        # filled lazily by the vectorizer
        self._cache = {}

    @property
    def trajectories(self):
        return self._trajectories

    def __len__(self):
        return len(self._trajectories)

    def __iter__(self):
        return iter(self._trajectories.values())

    def __contains__(self, tid):
        return tid in self._trajectories

    def traveled_segments(self):
        """Segment ids traveled by at least one trajectory, sorted."""
        return sorted(self.df)

    def occurrences(self, e, t):
        try:
            return self.counts[t].get(e, 0)
        except KeyError:
            raise KeyError(f"unknown trajectory id {t!r}") from None

    def statistics(self):
        """Plain-dict snapshot of all counts, for equality checks."""
        return {
            "n": len(self),
            "counts": {t: dict(c) for t, c in self.counts.items()},
            "df": dict(self.df),
            "totals": dict(self.totals),
            "distinct": dict(self.distinct),
        }


def validate_trajectory(t, network, line=None, source=None):
    if not t.segments:
        raise TrajectoryFormatError(f"trajectory {t.id!r} is empty", line, source)
    for e in t.segments:
        if e not in network:
            raise TrajectoryFormatError(
                f"trajectory {t.id!r} references unknown segment {e!r}", line, source)
    for a, b in zip(t.segments, t.segments[1:]):
        if network[a].target != network[b].source:
            raise TrajectoryFormatError(
                f"trajectory {t.id!r}: segments {a!r} and {b!r} are not connected "
                f"({network[a].target!r} != {network[b].source!r})", line, source)


def load_trajectories(source, network):
    """Parse a trajectory CSV (``trajectory_id,segment_ids`` with ``;``-separated ids)."""
    stream, name, close = open_text(source)
    try:
        trajs = []
        seen = {}
        header_seen = False
        for lineno, line in data_lines(stream):
            cols = [c.strip() for c in line.split(",")]
            if not header_seen:
                header_seen = True
                if tuple(cols) == TRAJECTORY_HEADER:
                    continue
                raise TrajectoryFormatError(
                    f"expected header {','.join(TRAJECTORY_HEADER)!r}, got {line!r}", lineno, name)
            if len(cols) != 2:
                raise TrajectoryFormatError(f"expected 2 columns, got {len(cols)}", lineno, name)
            tid, raw = cols
            if not tid:
                raise TrajectoryFormatError("empty trajectory id", lineno, name)
            if tid in seen:
                raise TrajectoryFormatError(
                    f"duplicate trajectory id {tid!r} (first defined on line {seen[tid]})", lineno, name)
            segs = tuple(s.strip() for s in raw.split(";") if s.strip())
            t = Trajectory(tid, segs)
            validate_trajectory(t, network, lineno, name)
            seen[tid] = lineno
            trajs.append(t)
    finally:
        if close:
            stream.close()
    return Corpus(network, trajs)


def write_trajectories(corpus, stream):
    stream.write(",".join(TRAJECTORY_HEADER) + "\n")
    for t in corpus:
        stream.write(f"{t.id},{';'.join(t.segments)}\n")


def occurrences(corpus, e, t):
    """Number of times segment ``e`` appears in trajectory ``t``."""
    return corpus.occurrences(e, t)
