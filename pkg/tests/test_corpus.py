import io

import pytest

from trajcluster.corpus import Corpus, Trajectory, load_trajectories, occurrences, write_trajectories
from trajcluster.errors import TrajectoryFormatError

from conftest import HAND_TRAJECTORIES


def load(text, net):
    return load_trajectories(io.StringIO("trajectory_id,segment_ids\n" + text), net)


def test_document_frequencies(hand_network):
    c = load("T1,s1;s2\nT2,s1;s2;s3\n", hand_network)
    assert dict(c.df) == {"s1": 2, "s2": 2, "s3": 1}
    assert len(c) == 2


def test_hand_corpus_statistics(hand_corpus):
    assert dict(hand_corpus.df) == {"s1": 3, "s2": 2, "s3": 1, "s4": 1}
    assert dict(hand_corpus.distinct) == {"T1": 2, "T2": 3, "T3": 2}
    assert hand_corpus.traveled_segments() == ["s1", "s2", "s3", "s4"]


def test_connectivity_error_names_pair(hand_network):
    with pytest.raises(TrajectoryFormatError, match="'s1' and 's3'") as exc:
        load("T9,s1;s3\n", hand_network)
    assert exc.value.line == 2
    assert "T9" in str(exc.value)


def test_unknown_segment(hand_network):
    with pytest.raises(TrajectoryFormatError, match="s99"):
        load("T9,s99\n", hand_network)


def test_duplicate_trajectory_id(hand_network):
    with pytest.raises(TrajectoryFormatError, match="duplicate"):
        load("T1,s1\nT1,s1;s2\n", hand_network)


def test_empty_trajectory(hand_network):
    with pytest.raises(TrajectoryFormatError, match="empty"):
        load("T1,\n", hand_network)
    with pytest.raises(TrajectoryFormatError):
        Corpus(hand_network, [Trajectory("T1", ())])


def test_occurrences(hand_corpus):
    assert occurrences(hand_corpus, "s2", "T1") == 1
    assert occurrences(hand_corpus, "s4", "T1") == 0
    with pytest.raises(KeyError):
        occurrences(hand_corpus, "s1", "T404")


def test_loop_multiplicity():
    from trajcluster.network import RoadNetwork, Segment
    net = RoadNetwork([Segment("s1", "A", "B", 1), Segment("s2", "B", "C", 1),
                       Segment("back", "C", "B", 1)])
    c = Corpus(net, [Trajectory("L", ("s1", "s2", "back", "s2"))])
    assert c.occurrences("s2", "L") == 2
    assert c.totals["s2"] == 2
    assert c.df["s2"] == 1


def test_incidence_invariants(hand_corpus):
    assert sum(hand_corpus.df.values()) == sum(hand_corpus.distinct.values())
    for e, total in hand_corpus.totals.items():
        assert total == sum(hand_corpus.occurrences(e, t.id) for t in hand_corpus)
        assert 1 <= hand_corpus.df[e] <= len(hand_corpus)


def test_reload_identical_statistics(hand_network, hand_corpus):
    buf = io.StringIO()
    write_trajectories(hand_corpus, buf)
    again = load_trajectories(io.StringIO(buf.getvalue()), hand_network)
    assert again.statistics() == hand_corpus.statistics()
    assert load_trajectories(io.StringIO(HAND_TRAJECTORIES), hand_network).statistics() == hand_corpus.statistics()
