import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from echotrack.graph import (
    AttributedSnapshotGraph, InteractionEvent, NoDataError, build_snapshots, degree_stats,
)

from conftest import make_graph


def ev(a, t, ts, score=None):
    return InteractionEvent(a, t, ts, score)


def test_reply_counts_accumulate_both_directions():
    net = build_snapshots([ev("u", "v", 0), ev("v", "u", 1), ev("u", "v", 2)], window_length=10)
    assert len(net) == 1
    assert dict(net[0].edges) == {("u", "v"): 3}


def test_self_reply_creates_no_edge_or_node():
    net = build_snapshots([ev("u", "u", 0)], window_length=10)
    assert len(net[0].edges) == 0
    assert net[0].nodes == ()


def test_boundary_event_goes_to_later_window():
    net = build_snapshots([ev("a", "b", 0), ev("a", "c", 10)], window_length=10, origin=0)
    assert [s.window for s in net] == [(0, 10), (10, 20)]
    assert dict(net[1].edges) == {("a", "c"): 1}


def test_empty_windows_are_kept():
    net = build_snapshots([ev("a", "b", 0), ev("a", "b", 35)], window_length=10)
    assert len(net) == 4
    assert [len(s.edges) for s in net] == [1, 0, 0, 1]
    assert [s.snapshot_index for s in net] == [0, 1, 2, 3]


def test_empty_stream_raises():
    with pytest.raises(NoDataError):
        build_snapshots([], window_length=10)


def test_missing_endpoint_is_rejected_not_fatal():
    net = build_snapshots([ev("a", "", 0), ev("a", "b", 1)], window_length=10)
    assert len(net.rejected) == 1
    assert dict(net[0].edges) == {("a", "b"): 1}


def test_bad_window_and_origin():
    with pytest.raises(ValueError):
        build_snapshots([ev("a", "b", 0)], window_length=0)
    with pytest.raises(ValueError):
        build_snapshots([ev("a", "b", 0)], window_length=5, origin=3)


def test_prediction_score_range():
    with pytest.raises(ValueError):
        InteractionEvent("a", "b", 0, 1.5)


def test_graph_invariants_enforced():
    with pytest.raises(ValueError):
        AttributedSnapshotGraph(0, (0, 1), ("a",), {("a", "a"): 1})
    with pytest.raises(ValueError):
        AttributedSnapshotGraph(0, (0, 1), ("a",), {("a", "b"): 1})
    with pytest.raises(ValueError):
        AttributedSnapshotGraph(0, (0, 1), ("a", "b"), {("a", "b"): 0})


def test_with_labels_drops_unlabeled_nodes_and_edges():
    g = make_graph([("a", "b"), ("b", "c")])
    g2 = g.with_labels({"a": "pro", "b": "anti"})
    assert g2.nodes == ("a", "b")
    assert dict(g2.edges) == {("a", "b"): 1}
    assert g2.is_labeled


def test_adjacency_arrays_symmetric():
    g = make_graph([("a", "b", 2), ("b", "c", 1)])
    index, indptr, indices, weights = g.adjacency_arrays()
    assert indptr.tolist() == [0, 1, 3, 4]
    assert indices.tolist() == [1, 0, 2, 1]
    assert weights.tolist() == [2.0, 2.0, 1.0, 1.0]


@pytest.mark.parametrize(
    "edges, n, expected",
    [
        ([("a", "b"), ("b", "c"), ("a", "c")], 3, (2.0, 1.0)),
        ([("a", "b")], 2, (1.0, 1.0)),
        ([("hub", f"leaf{i}") for i in range(9)], 10, (1.8, 0.2)),  # 9 edges on 10 nodes
    ],
)
def test_degree_stats(edges, n, expected):
    s = degree_stats(make_graph(edges))
    assert s.node_count == n
    assert s.average_degree == pytest.approx(expected[0], abs=1e-12)
    assert s.density == pytest.approx(expected[1], abs=1e-12)
    assert s.density_defined


def test_degree_stats_tiny_graph_flags_density():
    s = degree_stats(AttributedSnapshotGraph(0, (0, 1), ("a",), {}))
    assert s.density == 0.0 and not s.density_defined


events_strategy = st.lists(
    st.tuples(st.sampled_from("abcdef"), st.sampled_from("abcdef"), st.integers(0, 99)),
    min_size=1, max_size=60,
)


@settings(max_examples=60, deadline=None)
@given(events_strategy, st.randoms(use_true_random=False))
def test_order_independence_and_weight_sum(raw, rnd):
    events = [ev(a, b, ts) for a, b, ts in raw]
    net = build_snapshots(events, window_length=25)
    shuffled = list(events)
    rnd.shuffle(shuffled)
    assert build_snapshots(shuffled, window_length=25, origin=net[0].window[0]) == net
    for snap in net:
        in_window = [e for e in events if snap.window[0] <= e.timestamp < snap.window[1] and not e.is_self_reply]
        assert snap.total_weight == len(in_window)


def test_rebuild_is_deterministic():
    rng = random.Random(3)
    events = [ev(f"u{rng.randrange(20)}", f"u{rng.randrange(20)}", rng.randrange(1000)) for _ in range(300)]
    a = build_snapshots(events, 100)
    b = build_snapshots(events, 100)
    assert a == b
    assert [list(s.edges.items()) for s in a] == [list(s.edges.items()) for s in b]
