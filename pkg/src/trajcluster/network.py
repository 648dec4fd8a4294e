"""Directed road network: nodes are intersections, edges are travelable segments."""

from dataclasses import dataclass
from types import MappingProxyType
import logging
import math

from ._io import data_lines, open_text
from .errors import NetworkFormatError

log = logging.getLogger(__name__)

NETWORK_HEADER = ("segment_id", "from_node", "to_node", "length_m")


@dataclass(frozen=True)
class Segment:
    id: str
    source: str
    target: str
    length: float


class RoadNetwork:
    """Immutable directed graph of road segments.

    Node identifiers are inferred from segment endpoints. ``out_segments``
    maps a node id to the ids of segments leaving it, in input order.
    """

    def __init__(self, segments):
        segs = {}
        out = {}
        nodes = set()
        for s in segments:
            if s.id in segs:
                raise ValueError(f"duplicate segment id {s.id!r}")
            if not (s.length > 0 and math.isfinite(s.length)):
                raise ValueError(f"segment {s.id!r} has non-positive length {s.length!r}")
            segs[s.id] = s
            nodes.add(s.source)
            nodes.add(s.target)
            out.setdefault(s.source, []).append(s.id)
        self._segments = MappingProxyType(segs)
        self._out = MappingProxyType({k: tuple(v) for k, v in out.items()})
        self.nodes = frozenset(nodes)

    @property
    def segments(self):
        return self._segments

    @property
    def out_segments(self):
        return self._out

    def __len__(self):
        return len(self._segments)

    def __contains__(self, segment_id):
        return segment_id in self._segments

    def __getitem__(self, segment_id):
        return self._segments[segment_id]

    def length(self, segment_id):
        return self._segments[segment_id].length

    def warnings(self):
        """Non-fatal oddities, currently only self-loop segments."""
        return [f"segment {s.id!r} is a self-loop on node {s.source!r}"
                for s in self._segments.values() if s.source == s.target]

    def __eq__(self, other):
        if not isinstance(other, RoadNetwork):
            return NotImplemented
        return dict(self._segments) == dict(other._segments)

    def __repr__(self):
        return f"RoadNetwork(nodes={len(self.nodes)}, segments={len(self)})"


def load_network(source):
    """Parse a network CSV (``segment_id,from_node,to_node,length_m``).

    ``source`` may be a path, raw bytes, or a text/binary stream. Errors carry
    the offending line number.
    """
    stream, name, close = open_text(source)
    try:
        segments = []
        seen = {}
        header_seen = False
        for lineno, line in data_lines(stream):
            cols = [c.strip() for c in line.split(",")]
            if not header_seen:
                header_seen = True
                if tuple(cols) == NETWORK_HEADER:
                    continue
                raise NetworkFormatError(
                    f"expected header {','.join(NETWORK_HEADER)!r}, got {line!r}", lineno, name)
            if len(cols) != 4:
                raise NetworkFormatError(f"expected 4 columns, got {len(cols)}", lineno, name)
            sid, src, dst, raw_len = cols
            if not sid or not src or not dst:
                raise NetworkFormatError("empty identifier", lineno, name)
            try:
                length = float(raw_len)
            except ValueError:
                raise NetworkFormatError(f"length {raw_len!r} is not a number", lineno, name) from None
            if sid in seen:
                raise NetworkFormatError(
                    f"duplicate segment id {sid!r} (first defined on line {seen[sid]})", lineno, name)
            if not (length > 0 and math.isfinite(length)):
                raise NetworkFormatError(f"segment {sid!r} has non-positive length {raw_len}", lineno, name)
            seen[sid] = lineno
            segments.append(Segment(sid, src, dst, length))
    finally:
        if close:
            stream.close()
    net = RoadNetwork(segments)
    for w in net.warnings():
        log.warning(w)
    return net


def write_network(network, stream):
    stream.write(",".join(NETWORK_HEADER) + "\n")
    for s in network.segments.values():
        stream.write(f"{s.id},{s.source},{s.target},{s.length!r}\n")


def segment_count(network):
    return len(network)


def are_connected(a, b):
    """True when the end node of one segment is the start node of the other."""
    return a.target == b.source or b.target == a.source
