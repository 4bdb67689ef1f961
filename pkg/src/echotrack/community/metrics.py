"""Partition type and the two quality functions EVA trades off: modularity and purity."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from ..graph import AttributedSnapshotGraph


@dataclass(frozen=True)
class Partition:
    """Node-to-community assignment with dense community ids ``0..k-1``."""

    snapshot_index: int
    assignment: Mapping[str, int]
    communities: Mapping[int, frozenset] = field(init=False)

    def __post_init__(self):
        groups: dict[int, set] = {}
        for node, cid in self.assignment.items():
            groups.setdefault(cid, set()).add(node)
        if sorted(groups) != list(range(len(groups))):
            raise ValueError("community ids must be dense integers from 0")
        object.__setattr__(self, "assignment", dict(self.assignment))
        object.__setattr__(self, "communities", {c: frozenset(groups[c]) for c in sorted(groups)})

    @classmethod
    def from_groups(cls, snapshot_index: int, groups: Iterable[Iterable[str]]) -> "Partition":
        """Number groups by their smallest member so ids do not depend on input order."""
        groups = sorted((sorted(g) for g in groups if g), key=lambda g: g[0])
        return cls(snapshot_index, {n: cid for cid, g in enumerate(groups) for n in g})

    def __len__(self):
        return len(self.communities)


def modularity(graph: AttributedSnapshotGraph, partition: Partition | Mapping[str, int]) -> float:
    """Weighted Newman modularity of ``partition`` on ``graph``.

    Computed per community as ``in_c/2m - (tot_c/2m)^2``, which is the ordered-pair
    double sum regrouped by community.
    """
    assignment = partition.assignment if isinstance(partition, Partition) else partition
    if set(assignment) != set(graph.nodes):
        raise ValueError("partition must cover exactly the graph's nodes")
    m = graph.total_weight
    if m == 0:
        raise ValueError("modularity is undefined on a graph without edges")
    internal: Counter = Counter()
    total: Counter = Counter()
    for (u, v), w in graph.edges.items():
        cu, cv = assignment[u], assignment[v]
        total[cu] += w
        total[cv] += w
        if cu == cv:
            internal[cu] += 2 * w
    two_m = 2.0 * m
    return math.fsum(internal[c] / two_m - (total[c] / two_m) ** 2 for c in total)


def purity(community: Iterable[str], labels: Mapping[str, object] | Sequence[Mapping[str, object]]) -> float:
    """Product over attributes of the modal-value share inside ``community``.

    ``labels`` is one ``node -> value`` mapping, or a sequence of them for
    several attributes.
    """
    members = list(community)
    if not members:
        raise ValueError("purity of an empty community is undefined")
    attributes = [labels] if isinstance(labels, Mapping) else list(labels)
    result = 1.0
    for attr in attributes:
        try:
            counts = Counter(attr[n] for n in members)
        except KeyError as exc:
            raise ValueError(f"node {exc.args[0]!r} has no label") from None
        result *= max(counts.values()) / len(members)
    return result


def partition_purity(partition: Partition, labels, weighted: bool = True) -> float:
    """Purity of a whole partition: size-weighted (default) or plain mean over communities."""
    if not partition.communities:
        raise ValueError("purity of an empty partition is undefined")
    comms = list(partition.communities.values())
    if weighted:
        n = sum(len(c) for c in comms)
        return math.fsum(len(c) * purity(c, labels) for c in comms) / n
    return math.fsum(purity(c, labels) for c in comms) / len(comms)
