"""Echo chamber classification of communities by conductance, purity and size."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .community.metrics import Partition, purity
from .graph import AttributedSnapshotGraph
from .io import write_csv

CONDUCTANCE_MODES = ("paper", "classic")


@dataclass(frozen=True)
class EcThresholds:
    conductance_max: float = 0.5
    purity_min: float = 0.7
    min_size: int = 20

    def __post_init__(self):
        if not 0.0 <= self.conductance_max <= 1.0:
            raise ValueError("conductance_max must be in [0, 1]")
        if not 0.0 <= self.purity_min <= 1.0:
            raise ValueError("purity_min must be in [0, 1]")
        if self.min_size < 1:
            raise ValueError("min_size must be >= 1")

    def is_ec(self, size: int, purity: float, conductance: float) -> bool:
        return conductance <= self.conductance_max and purity >= self.purity_min and size >= self.min_size


@dataclass(frozen=True)
class CommunityAssessment:
    snapshot_index: int
    community_id: int
    size: int
    purity: float
    conductance: float
    label_histogram: dict = field(hash=False)
    is_ec: bool
    degenerate: bool = False


def boundary_volumes(graph: AttributedSnapshotGraph, community: Iterable[str]) -> tuple[int, int]:
    """``(internal, boundary)`` edge weight of ``community``.

    Internal edges have both endpoints inside, boundary edges exactly one.
    """
    members = set(community)
    inside = out = 0
    for (u, v), w in graph.edges.items():
        a, b = u in members, v in members
        if a and b:
            inside += w
        elif a or b:
            out += w
    return inside, out


def conductance_from_volumes(internal: float, boundary: float, mode: str = "paper") -> tuple[float, bool]:
    """Conductance and a degenerate flag.

    ``paper``: ``2*boundary / (2*internal + boundary)``; ``classic``:
    ``boundary / (2*internal + boundary)``. A community touching no edge gets 1.0;
    values above 1 (paper form with no internal edge) are clamped. Both cases
    set the flag.
    """
    if mode not in CONDUCTANCE_MODES:
        raise ValueError(f"unknown conductance mode {mode!r}")
    denom = 2 * internal + boundary
    if denom == 0:
        return 1.0, True
    num = 2 * boundary if mode == "paper" else boundary
    value = num / denom
    if value > 1.0:
        return 1.0, True
    return value, False


def conductance(graph: AttributedSnapshotGraph, community: Iterable[str], mode: str = "paper") -> float:
    members = set(community)
    if not members:
        raise ValueError("conductance of an empty community is undefined")
    stray = members.difference(graph.nodes)
    if stray:
        raise ValueError(f"community has nodes outside the graph: {sorted(stray)[:3]}")
    return conductance_from_volumes(*boundary_volumes(graph, members), mode)[0]


def classify(
    partition: Partition,
    graph: AttributedSnapshotGraph,
    thresholds: EcThresholds = EcThresholds(),
    mode: str = "paper",
) -> list[CommunityAssessment]:
    """Assess every community of ``partition``; sorted by community id."""
    assignment = partition.assignment
    internal: Counter = Counter()
    boundary: Counter = Counter()
    for (u, v), w in graph.edges.items():
        cu, cv = assignment[u], assignment[v]
        if cu == cv:
            internal[cu] += w
        else:
            boundary[cu] += w
            boundary[cv] += w
    out = []
    for cid, members in sorted(partition.communities.items()):
        if not members.issubset(graph.labels.keys()):
            raise ValueError(f"community {cid} has unlabeled members")
        cond, degenerate = conductance_from_volumes(internal[cid], boundary[cid], mode)
        pur = purity(members, graph.labels)
        hist = dict(sorted(Counter(graph.labels[n] for n in members).items()))
        out.append(
            CommunityAssessment(
                partition.snapshot_index, cid, len(members), pur, cond, hist,
                thresholds.is_ec(len(members), pur, cond), degenerate,
            )
        )
    return out


def scatter_data(assessments: Sequence[CommunityAssessment], thresholds: EcThresholds = EcThresholds()):
    """Rows ``(purity, 1 - conductance, size, is_ec)`` plus the quadrant boundaries.

    EC points sit right of ``purity_min`` and above ``1 - conductance_max``.
    """
    if not assessments:
        raise ValueError("no assessments to plot")
    rows = [(a.purity, 1.0 - a.conductance, a.size, a.is_ec) for a in assessments]
    meta = {"purity_boundary": thresholds.purity_min, "inverse_conductance_boundary": 1.0 - thresholds.conductance_max}
    return rows, meta


def write_assessments(path, assessments: Iterable[CommunityAssessment]) -> None:
    write_csv(
        path,
        ["snapshot", "community", "size", "purity", "conductance", "is_ec"],
        ((a.snapshot_index, a.community_id, a.size, a.purity, a.conductance, a.is_ec) for a in assessments),
    )


def write_scatter(path, assessments: Sequence[CommunityAssessment]) -> None:
    write_csv(
        path,
        ["snapshot", "community", "purity", "inverse_conductance", "size", "is_ec"],
        (
            (a.snapshot_index, a.community_id, a.purity, 1.0 - a.conductance, a.size, a.is_ec)
            for a in assessments
        ),
    )
