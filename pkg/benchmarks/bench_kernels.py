"""Time the compiled kernels against their pure-Python twins.

    python benchmarks/bench_kernels.py [--repeat N] [--scale S]

Each stage runs on identical inputs under both backends; outputs are
checked for equality before timings are reported. Graph stages reuse the
corpus's cached weight vectors, so they time pair evaluation only.
"""

import argparse
import time

import numpy as np

from trajcluster import _backend
from trajcluster.community import NullModelConfig, optimize_partition, significance_test
from trajcluster.datagen import GenerationSpec, GroupSpec, generate_corpus, generate_network, node_id
from trajcluster.simgraph import build_segment_graph, build_trajectory_graph


def corpus(scale, seed=0):
    size = 30
    rng = np.random.default_rng(seed)
    groups = []
    while len(groups) < 20:
        a, b = node_id(*rng.integers(0, size, 2)), node_id(*rng.integers(0, size, 2))
        if a != b:
            groups.append(GroupSpec(a, b, max(1, int(50 * scale)), 0.2))
    spec = GenerationSpec(size, size, groups=groups, seed=seed)
    return generate_corpus(spec, generate_network(spec))[0]


def best_of(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--scale", type=float, default=1.0, help="trajectories per group = 50 * scale")
    args = ap.parse_args()

    names = _backend.available()
    if "cython" not in names:
        print("compiled kernels not built; only the Python backend is available")
    backends = {n: _backend.get(n) for n in names}
    c = corpus(args.scale)
    traj = build_trajectory_graph(c)
    seg = build_segment_graph(c)
    small = seg.induced_subgraph(seg.node_ids[:300])
    print(f"corpus: {len(c)} trajectories; trajectory graph {len(traj)} nodes / {traj.n_edges} edges; "
          f"segment graph {len(seg)} / {seg.n_edges}; optimizer graph {len(small)} / {small.n_edges}")

    stages = {
        "trajectory graph": lambda k: build_trajectory_graph(c, k),
        "segment graph (loose)": lambda k: build_segment_graph(c, "loose", k),
        "optimize_partition": lambda k: optimize_partition(small, seed=1, kernels=k),
        "significance test (R=5)": lambda k: significance_test(
            small, 0.5, NullModelConfig(samples=5, seed=2), kernels=k).null_qs,
    }
    header = f"{'stage':<26}" + "".join(f"{n:>12}" for n in names) + ("     speedup" if len(names) > 1 else "")
    print(header)
    print("-" * len(header))
    for title, fn in stages.items():
        times, outs = {}, {}
        for n, k in backends.items():
            times[n], outs[n] = best_of(lambda: fn(k), args.repeat)
        if len(outs) > 1:
            first, *rest = outs.values()
            assert all(o == first for o in rest), f"backends disagree on {title}"
        row = f"{title:<26}" + "".join(f"{times[n]:>11.4f}s" for n in names)
        if len(names) > 1:
            row += f"{times['python'] / times['cython']:>11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
