"""Attributed dynamic network model and snapshot construction.

A dynamic network is an ordered sequence of snapshot graphs, one per fixed
time window. Each snapshot is a weighted undirected graph whose edge weight
counts the replies exchanged by the two users inside the window, in either
direction. Nodes carry a discrete leaning label once the leaning module has
been applied.
"""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

logger = logging.getLogger(__name__)

LABELS = ("anti", "neutral", "pro")


class NoDataError(ValueError):
    """Raised when there is nothing to build a network from."""


@dataclass(frozen=True)
class InteractionEvent:
    """One reply from ``actor`` to ``target`` at ``timestamp`` (epoch seconds)."""

    actor: str
    target: str
    timestamp: int
    prediction_score: float | None = None
    doc_id: str | None = None
    topic_id: str | None = None
    keywords: tuple[str, ...] | None = None
    text: str | None = None

    def __post_init__(self):
        if self.prediction_score is not None and not 0.0 <= self.prediction_score <= 1.0:
            raise ValueError(f"prediction_score {self.prediction_score} outside [0, 1]")

    @property
    def is_self_reply(self) -> bool:
        return self.actor == self.target


def _pair(u: str, v: str) -> tuple[str, str]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True, eq=False)
class AttributedSnapshotGraph:
    """Weighted undirected graph for one window ``[start, end)``.

    ``edges`` maps sorted ``(u, v)`` pairs to positive integer weights. ``labels``
    maps node ids to a leaning label; it is empty until labels are attached.
    """

    snapshot_index: int
    window: tuple[int, int]
    nodes: tuple[str, ...]
    edges: Mapping[tuple[str, str], int]
    labels: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(sorted(set(self.nodes))))
        object.__setattr__(self, "edges", MappingProxyType(dict(sorted(self.edges.items()))))
        object.__setattr__(self, "labels", MappingProxyType(dict(self.labels)))
        node_set = set(self.nodes)
        for (u, v), w in self.edges.items():
            if u == v:
                raise ValueError(f"self-loop on {u!r}")
            if u > v:
                raise ValueError(f"edge key {(u, v)!r} is not sorted")
            if w <= 0:
                raise ValueError(f"non-positive weight on {(u, v)!r}")
            if u not in node_set or v not in node_set:
                raise ValueError(f"edge {(u, v)!r} has an endpoint outside the node set")
        stray = set(self.labels) - node_set
        if stray:
            raise ValueError(f"labels for unknown nodes: {sorted(stray)[:5]}")

    def __eq__(self, other):
        if not isinstance(other, AttributedSnapshotGraph):
            return NotImplemented
        return (
            self.snapshot_index == other.snapshot_index
            and self.window == other.window
            and self.nodes == other.nodes
            and dict(self.edges) == dict(other.edges)
            and dict(self.labels) == dict(other.labels)
        )

    @property
    def is_labeled(self) -> bool:
        return len(self.labels) == len(self.nodes)

    @property
    def total_weight(self) -> int:
        return sum(self.edges.values())

    def neighbors(self) -> dict[str, dict[str, int]]:
        adj: dict[str, dict[str, int]] = {n: {} for n in self.nodes}
        for (u, v), w in self.edges.items():
            adj[u][v] = w
            adj[v][u] = w
        return adj

    def adjacency_arrays(self):
        """Return ``(index, indptr, indices, weights)`` for a symmetric CSR adjacency.

        ``index`` maps node id to row; rows follow the sorted node order.
        """
        index = {n: i for i, n in enumerate(self.nodes)}
        n = len(self.nodes)
        if not self.edges:
            return index, np.zeros(n + 1, dtype=np.int64), np.zeros(0, dtype=np.int64), np.zeros(0)
        src = np.fromiter((index[u] for u, _ in self.edges), dtype=np.int64, count=len(self.edges))
        dst = np.fromiter((index[v] for _, v in self.edges), dtype=np.int64, count=len(self.edges))
        w = np.fromiter(self.edges.values(), dtype=np.float64, count=len(self.edges))
        rows = np.concatenate([src, dst])
        cols = np.concatenate([dst, src])
        vals = np.concatenate([w, w])
        order = np.lexsort((cols, rows))
        rows, cols, vals = rows[order], cols[order], vals[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(indptr, rows + 1, 1)
        np.cumsum(indptr, out=indptr)
        return index, indptr, cols, vals

    def with_labels(self, labels: Mapping[str, str]) -> "AttributedSnapshotGraph":
        """Attach labels and drop every node without one, with its incident edges."""
        keep = {n for n in self.nodes if n in labels}
        edges = {e: w for e, w in self.edges.items() if e[0] in keep and e[1] in keep}
        return AttributedSnapshotGraph(
            self.snapshot_index, self.window, tuple(keep), edges, {n: labels[n] for n in keep}
        )

    def without_nodes(self, drop: Iterable[str]) -> "AttributedSnapshotGraph":
        drop = set(drop)
        keep = [n for n in self.nodes if n not in drop]
        edges = {e: w for e, w in self.edges.items() if e[0] not in drop and e[1] not in drop}
        labels = {n: l for n, l in self.labels.items() if n not in drop}
        return AttributedSnapshotGraph(self.snapshot_index, self.window, tuple(keep), edges, labels)


@dataclass(frozen=True)
class DynamicNetwork:
    snapshots: tuple[AttributedSnapshotGraph, ...]
    topic: str = ""
    rejected: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "snapshots", tuple(self.snapshots))
        for i, snap in enumerate(self.snapshots):
            if snap.snapshot_index != i:
                raise ValueError(f"snapshot at position {i} has index {snap.snapshot_index}")
            if i and snap.window[0] != self.snapshots[i - 1].window[1]:
                raise ValueError("snapshot windows must be contiguous and increasing")
            if snap.window[1] <= snap.window[0]:
                raise ValueError(f"empty window {snap.window}")

    def __len__(self):
        return len(self.snapshots)

    def __iter__(self):
        return iter(self.snapshots)

    def __getitem__(self, i):
        return self.snapshots[i]

    @property
    def is_labeled(self) -> bool:
        return all(s.is_labeled for s in self.snapshots)

    def window_of(self, timestamp: int) -> int | None:
        """Index of the snapshot whose window holds ``timestamp``, or None."""
        if not self.snapshots:
            return None
        start = self.snapshots[0].window[0]
        length = self.snapshots[0].window[1] - start
        k = (timestamp - start) // length
        return int(k) if 0 <= k < len(self.snapshots) else None

    def replace(self, snapshots: Sequence[AttributedSnapshotGraph]) -> "DynamicNetwork":
        return DynamicNetwork(tuple(snapshots), self.topic, self.rejected)


def build_snapshots(
    events: Iterable[InteractionEvent],
    window_length: int,
    origin: int | None = None,
    topic: str = "",
) -> DynamicNetwork:
    """Bucket reply events into half-open windows and count undirected edge weights.

    Windows are ``[origin + k*window_length, origin + (k+1)*window_length)``;
    ``origin`` defaults to the earliest timestamp. Every window between the first
    and the last event yields a snapshot, empty or not. Events missing an actor or
    a target are rejected with a diagnostic and skipped. Self-replies never create
    edges, and users seen only in self-replies are not nodes.
    """
    if window_length <= 0:
        raise ValueError("window_length must be positive")
    rejected: list[str] = []
    valid: list[InteractionEvent] = []
    for i, ev in enumerate(events):
        if not ev.actor or not ev.target:
            msg = f"event {i}: missing actor or target"
            logger.warning(msg)
            rejected.append(msg)
            continue
        valid.append(ev)
    if not valid:
        raise NoDataError("no usable interaction events")

    first = min(ev.timestamp for ev in valid)
    last = max(ev.timestamp for ev in valid)
    if origin is None:
        origin = first
    elif origin > first:
        raise ValueError(f"origin {origin} is after the earliest event {first}")
    n_windows = (last - origin) // window_length + 1

    counts: list[Counter] = [Counter() for _ in range(n_windows)]
    for ev in valid:
        if ev.is_self_reply:
            continue
        k = (ev.timestamp - origin) // window_length
        counts[k][_pair(ev.actor, ev.target)] += 1

    snapshots = []
    for k, c in enumerate(counts):
        nodes = {u for pair in c for u in pair}
        start = origin + k * window_length
        snapshots.append(AttributedSnapshotGraph(k, (start, start + window_length), tuple(nodes), dict(c)))
    return DynamicNetwork(tuple(snapshots), topic, tuple(rejected))


@dataclass(frozen=True)
class DegreeStats:
    node_count: int
    edge_count: int
    average_degree: float
    density: float
    density_defined: bool = True


def degree_stats(snapshot: AttributedSnapshotGraph) -> DegreeStats:
    """Unweighted size, average degree and density of one snapshot.

    Density is undefined below two nodes; it is then reported as 0 with
    ``density_defined`` False.
    """
    n = len(snapshot.nodes)
    e = len(snapshot.edges)
    avg = 2.0 * e / n if n else 0.0
    if n < 2:
        return DegreeStats(n, e, avg, 0.0, False)
    return DegreeStats(n, e, avg, 2.0 * e / (n * (n - 1)))
