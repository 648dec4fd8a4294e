import io
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from trajcluster.corpus import Corpus, Trajectory
from trajcluster.network import RoadNetwork, Segment
from trajcluster.simgraph import (LOOSE, SEGMENT, STRICT, TRAJECTORY, SimilarityGraph,
                                  build_graph_naive, build_segment_graph, build_trajectory_graph,
                                  candidate_pairs, induced_subgraph, write_edge_csv, write_graphml)
from trajcluster.vectorizer import cosine, segment_vector

from conftest import random_corpus, two_triangles


def test_trajectory_graph_hand_corpus(hand_corpus):
    g = build_trajectory_graph(hand_corpus)
    assert g.node_ids == ("T1", "T2", "T3")
    assert g.n_edges == 1
    assert g.weight("T1", "T2") == pytest.approx(0.346241553, abs=1e-9)
    assert g.degree("T3") == 0


def test_candidate_pairs(hand_corpus):
    assert sorted(candidate_pairs(hand_corpus, TRAJECTORY)) == [("T1", "T2"), ("T1", "T3"), ("T2", "T3")]


def test_candidate_pairs_degenerate(hand_network):
    disjoint = Corpus(hand_network, [Trajectory("A", ("s1",)), Trajectory("B", ("s3",))])
    assert list(candidate_pairs(disjoint, TRAJECTORY)) == []
    assert list(candidate_pairs(disjoint, SEGMENT)) == []
    single = Corpus(hand_network, [Trajectory("A", ("s1", "s2"))])
    assert list(candidate_pairs(single, TRAJECTORY)) == []


def test_segment_graphs_hand_corpus(hand_corpus):
    loose = build_segment_graph(hand_corpus, LOOSE)
    strict = build_segment_graph(hand_corpus, STRICT)
    assert set(loose.edge_dict()) == {("s1", "s2"), ("s1", "s3"), ("s1", "s4"), ("s2", "s3")}
    assert set(strict.edge_dict()) == {("s1", "s2"), ("s1", "s4"), ("s2", "s3")}
    assert loose.weight("s2", "s3") == pytest.approx(
        cosine(segment_vector(hand_corpus, "s2"), segment_vector(hand_corpus, "s3")), abs=1e-15)
    assert loose.weight("s2", "s3") == pytest.approx(0.383333, abs=1e-6)
    assert strict.weight("s2", "s3") == loose.weight("s2", "s3")
    assert loose.node_ids == strict.node_ids == ("s1", "s2", "s3", "s4")


def test_untraveled_segments_excluded(hand_network):
    c = Corpus(hand_network, [Trajectory("A", ("s1", "s2")), Trajectory("B", ("s1",))])
    assert build_segment_graph(c).node_ids == ("s1", "s2")


def test_disjoint_and_identical_corpora():
    net = RoadNetwork([Segment(f"s{i}", f"n{i}", f"n{i + 1}", 10.0) for i in range(4)])
    disjoint = Corpus(net, [Trajectory(f"T{i}", (f"s{i}",)) for i in range(4)])
    g = build_trajectory_graph(disjoint)
    assert len(g) == 4 and g.n_edges == 0
    for mode in (LOOSE, STRICT):
        assert build_segment_graph(disjoint, mode).n_edges == 0
    # two identical trajectories plus one unrelated so itf is positive
    twins = Corpus(net, [Trajectory("A", ("s0", "s1")), Trajectory("B", ("s0", "s1")), Trajectory("C", ("s3",))])
    g = build_trajectory_graph(twins)
    assert g.edge_dict() == {("A", "B"): 1.0}


def test_unknown_mode(hand_corpus):
    with pytest.raises(ValueError, match="mode"):
        build_segment_graph(hand_corpus, "tight")


@pytest.mark.parametrize("seed", range(20))
def test_candidate_path_equals_naive(seed, kernels):
    rng = np.random.default_rng(seed)
    c = random_corpus(rng, int(rng.integers(2, 51)))
    for kind, mode in ((TRAJECTORY, LOOSE), (SEGMENT, LOOSE), (SEGMENT, STRICT)):
        fast = (build_trajectory_graph(c, kernels) if kind == TRAJECTORY
                else build_segment_graph(c, mode, kernels))
        slow = build_graph_naive(c, kind, mode)
        assert fast.node_ids == slow.node_ids
        fe, se = fast.edge_dict(), slow.edge_dict()
        assert fe.keys() == se.keys()
        assert max((abs(fe[k] - se[k]) for k in fe), default=0.0) <= 1e-12


@pytest.mark.parametrize("seed", range(10))
def test_strict_subset_of_loose(seed):
    c = random_corpus(np.random.default_rng(100 + seed), 40)
    loose = build_segment_graph(c, LOOSE).edge_dict()
    strict = build_segment_graph(c, STRICT).edge_dict()
    assert strict.keys() <= loose.keys()
    assert all(strict[k] == loose[k] for k in strict)
    assert all(0 < w <= 1 for w in loose.values())


def test_order_independent():
    c = random_corpus(np.random.default_rng(5), 30)
    rev = Corpus(c.network, list(c)[::-1])
    assert build_trajectory_graph(c) == build_trajectory_graph(rev)
    assert build_segment_graph(c) == build_segment_graph(rev)


def test_graph_invariants():
    g, _ = two_triangles()
    assert g.m == 7.0
    assert g.degrees.sum() == 2 * g.m
    assert list(g.neighbors("v002")) == ["v000", "v001", "v003"]
    with pytest.raises(ValueError):
        SimilarityGraph.from_weighted_edges(["a"], [("a", "a", 1.0)])
    with pytest.raises(ValueError):
        SimilarityGraph.from_weighted_edges(["a", "b"], [("a", "b", 0.0)])
    with pytest.raises(ValueError):
        SimilarityGraph.from_weighted_edges(["a", "b"], [("a", "b", 1.0), ("b", "a", 0.5)])


def test_induced_subgraph():
    g, _ = two_triangles()
    tri = induced_subgraph(g, {"v000", "v001", "v002"})
    assert len(tri) == 3 and tri.n_edges == 3
    assert tri.degree("v002") == 2.0
    assert g.induced_subgraph(g.node_ids) == g
    one = g.induced_subgraph({"v004"})
    assert len(one) == 1 and one.n_edges == 0
    with pytest.raises(KeyError):
        g.induced_subgraph({"nope"})


def test_exports(hand_corpus):
    g = build_segment_graph(hand_corpus)
    buf = io.StringIO()
    write_edge_csv(g, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "node_a,node_b,weight"
    assert len(lines) == 1 + g.n_edges
    buf = io.StringIO()
    write_graphml(g, buf)
    root = ET.fromstring(buf.getvalue())
    ns = "{http://graphml.graphdrawing.org/xmlns}"
    assert len(root.findall(f".//{ns}node")) == len(g)
    assert len(root.findall(f".//{ns}edge")) == g.n_edges
