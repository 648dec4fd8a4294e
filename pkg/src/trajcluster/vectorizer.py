"""TF-IDF style weighting of trajectories and segments, and cosine similarity.

Trajectories are described by the segments they travel (length-weighted
segment frequency times inverse trajectory frequency). Segments are described
by the trajectories that travel them (share of the segment's occurrences
times a log penalty on long trajectories). Logarithms are natural.
"""

from dataclasses import dataclass, field
import math

from .errors import UndefinedWeightError

LOG_BASE = "natural"


@dataclass(frozen=True)
class WeightVector:
    owner: str
    entries: dict = field(default_factory=dict)

    def norm(self):
        return math.sqrt(sum(w * w for w in self.entries.values()))

    def scaled(self, c):
        return WeightVector(self.owner, {k: c * w for k, w in self.entries.items()})


def _require_trajectory(corpus, t):
    if t not in corpus:
        raise KeyError(f"unknown trajectory id {t!r}")


def ssf(corpus, e, t):
    _require_trajectory(corpus, t)
    counts = corpus.counts[t]
    n = counts.get(e, 0)
    if n == 0:
        return 0.0
    length = corpus.network.length
    total = sum(k * length(s) for s, k in counts.items())
    return n * length(e) / total


def itf(corpus, e):
    df = corpus.df.get(e, 0)
    if df == 0:
        raise UndefinedWeightError(f"segment {e!r} is not traveled by any trajectory; itf undefined")
    return math.log(len(corpus) / df)


def trajectory_vector(corpus, t):
    key = ("trajectory", t)
    vec = corpus._cache.get(key)
    if vec is None:
        _require_trajectory(corpus, t)
        counts = corpus.counts[t]
        length = corpus.network.length
        total = sum(k * length(s) for s, k in counts.items())
        n = len(corpus)
        vec = WeightVector(t, {
            s: (k * length(s) / total) * math.log(n / corpus.df[s]) for s, k in counts.items()
        })
        corpus._cache[key] = vec
    return vec


def segment_weight(corpus, t, e):
    """Weight of trajectory ``t`` when describing segment ``e``."""
    total = corpus.totals.get(e, 0)
    if total == 0:
        raise UndefinedWeightError(f"segment {e!r} is not traveled by any trajectory; weight undefined")
    n = corpus.occurrences(e, t)
    if n == 0:
        return 0.0
    return (n / total) * math.log(len(corpus.network) / corpus.distinct[t])


def _segment_postings(corpus):
    post = corpus._cache.get("postings")
    if post is None:
        post = {}
        for t, counts in corpus.counts.items():
            for e, k in counts.items():
                post.setdefault(e, []).append((t, k))
        corpus._cache["postings"] = post
    return post


def segment_vector(corpus, e):
    key = ("segment", e)
    vec = corpus._cache.get(key)
    if vec is None:
        total = corpus.totals.get(e, 0)
        if total == 0:
            raise UndefinedWeightError(f"segment {e!r} is not traveled by any trajectory; weight undefined")
        n_segments = len(corpus.network)
        vec = WeightVector(e, {
            t: (k / total) * math.log(n_segments / corpus.distinct[t])
            for t, k in _segment_postings(corpus)[e]
        })
        corpus._cache[key] = vec
    return vec


def cosine(u, v):
    """Cosine similarity of two sparse nonnegative vectors; 0 if either has zero norm."""
    a, b = u.entries, v.entries
    # sorted shared keys make the sum, and so the result, symmetric to the bit
    dot = sum(a[k] * b[k] for k in sorted(a.keys() & b.keys()))
    nu, nv = u.norm(), v.norm()
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return dot / (nu * nv)
