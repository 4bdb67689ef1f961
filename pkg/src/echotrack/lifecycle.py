"""Community lifecycles: noise filtering, Jaccard matching of adjacent snapshots, chains."""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .graph import DynamicNetwork, InteractionEvent
from .io import write_csv

logger = logging.getLogger(__name__)

CommunitySets = Mapping[int, frozenset]


@dataclass(frozen=True)
class ActivityFilterConfig:
    min_contributions: int = 2
    require_adjacent_overlap: bool = True
    match_threshold: float = 0.1

    def __post_init__(self):
        if self.min_contributions < 1:
            raise ValueError("min_contributions must be >= 1")
        if not 0.0 <= self.match_threshold <= 1.0:
            raise ValueError("match_threshold must be in [0, 1]")


@dataclass(frozen=True)
class LifecycleChain:
    chain_id: int
    steps: tuple[tuple[int, int, bool], ...]  # (snapshot_index, community_id, is_ec)
    jaccard_series: tuple[float, ...]

    def __post_init__(self):
        for (t0, _, _), (t1, _, _) in zip(self.steps, self.steps[1:]):
            if t1 != t0 + 1:
                raise ValueError("chain steps must advance one snapshot at a time")
        if len(self.jaccard_series) != max(0, len(self.steps) - 1):
            raise ValueError("need one jaccard value per transition")


def jaccard(a: Iterable, b: Iterable) -> float:
    a, b = set(a), set(b)
    union = len(a | b)
    return len(a & b) / union if union else 1.0


def one_time_users(events: Iterable[InteractionEvent], min_contributions: int = 2) -> set[str]:
    """Users who authored fewer than ``min_contributions`` events.

    Users who never authored anything (only replied to) count as zero.
    """
    events = list(events)
    authored = Counter(ev.actor for ev in events if ev.actor)
    seen = set(authored)
    for ev in events:
        if ev.target:
            seen.add(ev.target)
    return {u for u in seen if authored[u] < min_contributions}


def filter_one_time_users(network: DynamicNetwork, events: Sequence[InteractionEvent],
                          min_contributions: int = 2) -> DynamicNetwork:
    """Drop low-activity users, and their edges, from every snapshot."""
    if min_contributions <= 1:
        return network
    drop = one_time_users(events, min_contributions)
    snaps = []
    for snap in network:
        new = snap.without_nodes(drop)
        if snap.nodes and not new.nodes:
            logger.warning("activity filter emptied snapshot %d", snap.snapshot_index)
        snaps.append(new)
    return network.replace(snaps)


def stabilize_membership(
    communities: Sequence[CommunitySets], node_sets: Sequence[Iterable[str]]
) -> list[dict[int, frozenset]]:
    """Keep each member only if it is a node of an adjacent snapshot.

    First and last snapshots look at their single neighbour. Communities
    emptied by the filter are kept as empty sets so ids stay stable.
    """
    if len(communities) < 2:
        raise ValueError("lifecycle analysis needs at least two snapshots")
    if len(communities) != len(node_sets):
        raise ValueError("one node set per snapshot is required")
    node_sets = [frozenset(s) for s in node_sets]
    out = []
    for t, comms in enumerate(communities):
        adjacent = frozenset()
        if t > 0:
            adjacent |= node_sets[t - 1]
        if t + 1 < len(node_sets):
            adjacent |= node_sets[t + 1]
        out.append({cid: frozenset(members) & adjacent for cid, members in comms.items()})
    return out


def match_communities(
    left: CommunitySets, right: CommunitySets, threshold: float = 0.1
) -> list[tuple[int, int, float]]:
    """Greedy one-to-one matching by descending Jaccard, keeping pairs above ``threshold``.

    Ties go to the larger combined size, then to the smaller ``(left, right)`` ids.
    """
    pairs = []
    for ci, a in left.items():
        for cj, b in right.items():
            if not a or not b:
                continue
            inter = len(a & b)
            if not inter:
                continue
            j = inter / (len(a) + len(b) - inter)
            if j > threshold:
                pairs.append((-j, -(len(a) + len(b)), ci, cj, j))
    pairs.sort()
    used_l, used_r, out = set(), set(), []
    for _, _, ci, cj, j in pairs:
        if ci in used_l or cj in used_r:
            continue
        used_l.add(ci)
        used_r.add(cj)
        out.append((ci, cj, j))
    return sorted(out)


def build_chains(
    matches: Sequence[Sequence[tuple[int, int, float]]],
    is_ec: Mapping[tuple[int, int], bool],
    communities: Sequence[Iterable[int]] | None = None,
) -> list[LifecycleChain]:
    """Assemble maximal chains from per-pair matches.

    ``matches[t]`` links snapshot ``t`` to ``t + 1``. ``is_ec`` maps
    ``(snapshot, community)`` to the detection-time EC flag. When ``communities``
    (ids per snapshot) is given, unmatched communities become one-step chains.
    Chains are numbered by (start snapshot, start community).
    """
    forward = [{ci: (cj, j) for ci, cj, j in pair} for pair in matches]
    has_pred = [set()] + [{cj for _, cj, _ in pair} for pair in matches]
    n_snap = len(matches) + 1
    starts = set()
    for t, pair in enumerate(matches):
        starts.update((t, ci) for ci, _, _ in pair if ci not in has_pred[t])
    if communities is not None:
        for t, ids in enumerate(communities):
            starts.update((t, c) for c in ids if c not in has_pred[t])
    chains = []
    for t0, c0 in sorted(starts):
        steps, series = [(t0, c0, bool(is_ec.get((t0, c0), False)))], []
        t, c = t0, c0
        while t < n_snap - 1 and c in forward[t]:
            c, j = forward[t][c]
            t += 1
            steps.append((t, c, bool(is_ec.get((t, c), False))))
            series.append(j)
        chains.append(LifecycleChain(len(chains), tuple(steps), tuple(series)))
    return chains


def stability_rows(chains: Iterable[LifecycleChain]):
    """``(chain_id, pair_index, jaccard, is_ec_left, is_ec_right)``; pair_index is the left snapshot."""
    for ch in chains:
        for k, j in enumerate(ch.jaccard_series):
            left, right = ch.steps[k], ch.steps[k + 1]
            yield ch.chain_id, left[0], j, left[2], right[2]


def write_stability(path, chains: Iterable[LifecycleChain]) -> None:
    write_csv(path, ["chain_id", "pair_index", "jaccard", "is_ec_left", "is_ec_right"], stability_rows(chains))
