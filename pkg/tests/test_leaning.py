import pytest
from hypothesis import given
from hypothesis import strategies as st

from echotrack.graph import InteractionEvent, build_snapshots
from echotrack.leaning import LeaningThresholds, compute_leaning, discretize, label_network


def posts(user, scores, start=0):
    return [InteractionEvent(user, "x", start + i, s) for i, s in enumerate(scores)]


@pytest.mark.parametrize(
    "scores, expected, label",
    [([1.0, 1.0], 1.0, "pro"), ([0.2, 0.2, 0.2], 0.2, "anti"), ([0.3, 0.7], 0.5, "neutral")],
)
def test_compute_leaning(scores, expected, label):
    prof = compute_leaning(posts("u", scores))["u"]
    assert prof.score == pytest.approx(expected, abs=1e-15)
    assert prof.label == label
    assert prof.post_count == len(scores)


def test_discretize_boundaries_exact():
    assert discretize(0.3) == "anti"
    assert discretize(0.7) == "pro"
    assert discretize(0.699) == "neutral"
    assert discretize(0.0) == "anti" and discretize(1.0) == "pro"


def test_discretize_domain():
    for bad in (-0.01, 1.01, float("nan")):
        with pytest.raises(ValueError):
            discretize(bad)


def test_thresholds_validated():
    with pytest.raises(ValueError):
        LeaningThresholds(0.7, 0.3)


def test_unscored_users_omitted():
    events = posts("a", [0.9]) + [InteractionEvent("b", "a", 3)]
    profiles = compute_leaning(events)
    assert set(profiles) == {"a"}


def test_window_scope():
    events = posts("u", [1.0, 1.0], start=0) + posts("u", [0.0, 0.0], start=10)
    assert compute_leaning(events, window=(0, 10))["u"].label == "pro"
    assert compute_leaning(events, window=(10, 20))["u"].label == "anti"
    assert compute_leaning(events)["u"].score == 0.5


@given(st.lists(st.floats(0, 1), min_size=1, max_size=30), st.randoms(use_true_random=False))
def test_permutation_invariance(scores, rnd):
    shuffled = list(scores)
    rnd.shuffle(shuffled)
    assert compute_leaning(posts("u", scores))["u"].score == compute_leaning(posts("u", shuffled))["u"].score


@given(st.floats(0, 1), st.floats(0, 1))
def test_discretize_monotone(a, b):
    order = {"anti": 0, "neutral": 1, "pro": 2}
    lo, hi = sorted((a, b))
    assert order[discretize(lo)] <= order[discretize(hi)]


def test_label_network_matches_discretize_and_drops_unlabeled():
    events = [
        InteractionEvent("a", "b", 0, 0.9),
        InteractionEvent("b", "c", 1, 0.1),
        InteractionEvent("c", "a", 2),  # c never scored
    ]
    net = label_network(build_snapshots(events, 10), events)
    snap = net[0]
    assert snap.nodes == ("a", "b")
    profiles = compute_leaning(events)
    for node in snap.nodes:
        assert snap.labels[node] == discretize(profiles[node].score)
    assert net.is_labeled


def test_label_network_overrides():
    events = [InteractionEvent("a", "b", 0, 0.9), InteractionEvent("b", "a", 1, 0.9)]
    net = label_network(build_snapshots(events, 10), events, overrides={"b": 0.05})
    assert dict(net[0].labels) == {"a": "pro", "b": "anti"}
