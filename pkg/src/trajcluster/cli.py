"""Command-line entry point: ``trajcluster <command> [flags]``.

Commands: generate, cluster-trajectories, cluster-segments, eval, baseline.
Every command that writes files also writes a ``manifest.json`` recording its
parameters and input digests.
"""

import argparse
from collections import Counter
import hashlib
import json
import logging
import os
import sys

from . import __version__, _backend
from ._io import fmt_float
from .baseline import adjusted_rand_index, hac_average_linkage, write_dendrogram_csv
from .community import NullModelConfig, hierarchical_cluster
from .corpus import load_trajectories
from .datagen import (GenerationSpec, corridor_groups, export_corpus, generate_corpus,
                      generate_network, load_groups, load_labels)
from .errors import TrajclusterError
from .network import load_network
from .simgraph import (LOOSE, SEGMENT, STRICT, TRAJECTORY, build_segment_graph,
                       build_trajectory_graph, write_edge_csv, write_graphml)
from .vectorizer import LOG_BASE

log = logging.getLogger("trajcluster")

DEFAULT_SEED = 0
PARTITION_HEADER = ("entity_id", "cluster_label")


class UsageError(Exception):
    pass


def _sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _write(path, writer):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer(fh)
    return os.path.basename(path)


def _write_manifest(out, command, params, inputs, outputs):
    manifest = {
        "command": command,
        "version": __version__,
        "log_base": LOG_BASE,
        "params": params,
        "inputs": {os.path.basename(p): _sha256(p) for p in inputs},
        "outputs": sorted(outputs),
    }
    with open(os.path.join(out, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=1, sort_keys=True)
        fh.write("\n")


def _write_partition(partition, fh):
    fh.write(",".join(PARTITION_HEADER) + "\n")
    for v, c in zip(partition.node_ids, partition.labels):
        fh.write(f"{v},{c}\n")


def _grid(value):
    try:
        w, h = (int(x) for x in value.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected WIDTHxHEIGHT, got {value!r}") from None
    if w < 2 or h < 2:
        raise argparse.ArgumentTypeError("grid dimensions must be >= 2")
    return w, h


def _quantile(value):
    q = float(value)
    if not 0.0 < q < 1.0:
        raise argparse.ArgumentTypeError("quantile must lie in (0, 1)")
    return q


def _positive_int(value):
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return n


def _depth(value):
    d = int(value)
    if d < 0:
        raise argparse.ArgumentTypeError("depth must be >= 0")
    return d


# --- commands -----------------------------------------------------------------

def cmd_generate(args):
    w, h = args.grid
    if args.groups:
        groups = load_groups(args.groups)
        inputs = [args.groups]
    else:
        groups = corridor_groups(w, h, args.n_groups, args.count, args.detour)
        inputs = []
    spec = GenerationSpec(w, h, args.length, args.jitter, groups, args.seed)
    net = generate_network(spec)
    corpus, labels = generate_corpus(spec, net)
    paths = export_corpus(corpus, labels, args.out)
    params = {"grid": f"{w}x{h}", "seed": args.seed, "length_m": args.length, "jitter": args.jitter,
              "groups": [[g.origin, g.destination, g.count, g.detour] for g in groups]}
    _write_manifest(args.out, "generate", params, inputs, [os.path.basename(p) for p in paths.values()])
    print(f"wrote {len(net)} segments, {len(corpus)} trajectories in {len(groups)} groups to {args.out}")


def _load(args):
    net = load_network(args.network)
    corpus = load_trajectories(args.trajectories, net)
    return net, corpus


def _graph_for(args, corpus):
    if args.entity == TRAJECTORY:
        return build_trajectory_graph(corpus)
    return build_segment_graph(corpus, args.mode)


def _cluster(args, command):
    os.makedirs(args.out, exist_ok=True)
    _, corpus = _load(args)
    graph = _graph_for(args, corpus)
    if graph.n_edges == 0:
        log.warning("similarity graph has no edges; every entity stays in the root cluster")
    config = NullModelConfig(args.null_samples, args.significance_quantile, args.seed)
    hierarchy = hierarchical_cluster(graph, config, max_depth=args.max_depth)
    outputs = [_write(os.path.join(args.out, "hierarchy.json"),
                      lambda fh: fh.write(hierarchy.to_json() + "\n"))]
    for d in sorted(set(args.depth)):
        outputs.append(_write(os.path.join(args.out, f"cut_depth{d}.csv"),
                              lambda fh, d=d: _write_partition(hierarchy.cut(d), fh)))
    if args.export_graph:
        if args.graph_format == "graphml":
            outputs.append(_write(os.path.join(args.out, "graph.graphml"), lambda fh: write_graphml(graph, fh)))
        else:
            outputs.append(_write(os.path.join(args.out, "graph_edges.csv"), lambda fh: write_edge_csv(graph, fh)))
    params = {"entity": args.entity, "seed": args.seed, "null_samples": args.null_samples,
              "significance_quantile": args.significance_quantile, "depth": sorted(set(args.depth)),
              "max_depth": args.max_depth, "export_graph": args.export_graph,
              "graph_format": args.graph_format,
              "graph": {"nodes": len(graph), "edges": graph.n_edges, "total_weight": fmt_float(graph.m)},
              "hierarchy": {"depth": hierarchy.depth, "level_sizes": hierarchy.level_sizes(),
                            "leaves": len(hierarchy.leaves())}}
    if args.entity == SEGMENT:
        params["mode"] = args.mode
    _write_manifest(args.out, command, params, [args.network, args.trajectories], outputs)
    print(f"{args.entity} graph: {len(graph)} nodes, {graph.n_edges} edges; "
          f"hierarchy depth {hierarchy.depth}, level sizes {hierarchy.level_sizes()}")


def cmd_cluster_trajectories(args):
    args.entity = TRAJECTORY
    _cluster(args, "cluster-trajectories")


def cmd_cluster_segments(args):
    args.entity = SEGMENT
    _cluster(args, "cluster-segments")


def cmd_eval(args):
    pred = load_labels(args.predicted)
    truth = load_labels(args.truth)
    ari = adjusted_rand_index(pred, truth)
    sizes = Counter(Counter(pred.values()).values())
    report = {"ari": float(fmt_float(ari)), "entities": len(pred),
              "predicted_clusters": len(set(pred.values())), "truth_clusters": len(set(truth.values())),
              "cluster_size_histogram": {str(k): sizes[k] for k in sorted(sizes)}}
    print(f"ARI: {fmt_float(ari)}")
    print(f"entities: {len(pred)}  predicted clusters: {report['predicted_clusters']}  "
          f"truth clusters: {report['truth_clusters']}")
    print("cluster size histogram (size: count):")
    for k in sorted(sizes):
        print(f"  {k}: {sizes[k]}")
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        out = _write(os.path.join(args.out, "eval.json"),
                     lambda fh: fh.write(json.dumps(report, indent=1, sort_keys=True) + "\n"))
        _write_manifest(args.out, "eval", {}, [args.predicted, args.truth], [out])


def cmd_baseline(args):
    _, corpus = _load(args)
    graph = _graph_for(args, corpus)
    if args.k > len(graph):
        raise UsageError(f"--k {args.k} exceeds the number of entities ({len(graph)})")
    os.makedirs(args.out, exist_ok=True)
    dendrogram, partition = hac_average_linkage(graph, args.k)
    outputs = [
        _write(os.path.join(args.out, "dendrogram.csv"), lambda fh: write_dendrogram_csv(dendrogram, fh)),
        _write(os.path.join(args.out, "partition.csv"), lambda fh: _write_partition(partition, fh)),
    ]
    params = {"entity": args.entity, "k": args.k, "linkage": "average"}
    if args.entity == SEGMENT:
        params["mode"] = args.mode
    _write_manifest(args.out, "baseline", params, [args.network, args.trajectories], outputs)
    print(f"HAC average linkage: {len(graph)} entities -> {partition.k} clusters, "
          f"sizes {sorted(partition.sizes().tolist(), reverse=True)}")


# --- parser -------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="trajcluster", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({_backend.BACKEND} kernels)")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a synthetic grid network and planted corpus")
    g.add_argument("--grid", type=_grid, default=(10, 9), help="WIDTHxHEIGHT node counts (default 10x9)")
    g.add_argument("--groups", help="group spec CSV: origin,destination,count,detour")
    g.add_argument("--n-groups", type=_positive_int, default=3, help="corridors when --groups is absent")
    g.add_argument("--count", type=_positive_int, default=20, help="trajectories per corridor")
    g.add_argument("--detour", type=float, default=0.2, help="per-hop side-step probability")
    g.add_argument("--length", type=float, default=100.0, help="base segment length in meters")
    g.add_argument("--jitter", type=float, default=0.1, help="relative length jitter")
    g.add_argument("--seed", type=int, default=DEFAULT_SEED)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_generate)

    def io_flags(sp):
        sp.add_argument("--network", required=True)
        sp.add_argument("--trajectories", required=True)
        sp.add_argument("--out", required=True)

    def cluster_flags(sp):
        io_flags(sp)
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
        sp.add_argument("--null-samples", type=_positive_int, default=30)
        sp.add_argument("--significance-quantile", type=_quantile, default=0.95)
        sp.add_argument("--depth", type=_depth, action="append", default=None,
                        help="write a flat cut at this depth (repeatable; default 1)")
        sp.add_argument("--max-depth", type=_depth, default=None)
        sp.add_argument("--export-graph", action="store_true", help="also write the similarity graph")
        sp.add_argument("--graph-format", choices=("csv", "graphml"), default="csv")

    ct = sub.add_parser("cluster-trajectories", help="hierarchically cluster trajectories")
    cluster_flags(ct)
    ct.set_defaults(func=cmd_cluster_trajectories)

    cs = sub.add_parser("cluster-segments", help="hierarchically cluster road segments")
    cluster_flags(cs)
    cs.add_argument("--mode", choices=(LOOSE, STRICT), default=LOOSE)
    cs.set_defaults(func=cmd_cluster_segments)

    ev = sub.add_parser("eval", help="adjusted Rand index of a predicted partition")
    ev.add_argument("--predicted", required=True)
    ev.add_argument("--truth", required=True)
    ev.add_argument("--out")
    ev.set_defaults(func=cmd_eval)

    b = sub.add_parser("baseline", help="average-linkage agglomerative baseline")
    io_flags(b)
    b.add_argument("--k", type=_positive_int, required=True)
    b.add_argument("--entity", choices=(TRAJECTORY, SEGMENT), default=TRAJECTORY)
    b.add_argument("--mode", choices=(LOOSE, STRICT), default=LOOSE)
    b.set_defaults(func=cmd_baseline)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    if getattr(args, "depth", "absent") is None:
        args.depth = [1]
    try:
        args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (TrajclusterError, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
