"""EVA: Louvain-style greedy maximisation of ``alpha * purity + (1 - alpha) * modularity``.

Each level alternates a local-moving phase (seeded random node order, best
neighbouring community by combined gain, repeated until a sweep moves
nothing) with an aggregation phase that collapses communities into
super-nodes. Super-nodes keep the label histogram of the users they contain,
so purity is always measured over users. With ``alpha = 0`` this is plain
Louvain modularity optimisation.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from ..graph import AttributedSnapshotGraph
from .kernels import get_sweep
from .metrics import Partition, modularity, partition_purity

logger = logging.getLogger(__name__)

# safety net only: every accepted move raises the objective by more than min_gain
MAX_SWEEPS = 10_000


@dataclass(frozen=True)
class EvaConfig:
    alpha: float = 0.5
    seed: int = 42
    max_passes: int = 100
    min_gain: float = 1e-7
    weighted_purity: bool = True

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")
        if self.max_passes < 1:
            raise ValueError("max_passes must be >= 1")
        if self.min_gain < 0:
            raise ValueError("min_gain must be >= 0")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a non-negative 64-bit integer")


def eva_objective(graph: AttributedSnapshotGraph, partition: Partition, alpha: float,
                  weighted_purity: bool = True) -> float:
    return alpha * partition_purity(partition, graph.labels, weighted_purity) + (1 - alpha) * modularity(
        graph, partition
    )


def _check_graph(graph: AttributedSnapshotGraph):
    if not graph.edges:
        raise ValueError(f"snapshot {graph.snapshot_index} has no edges")
    if not graph.is_labeled:
        missing = [n for n in graph.nodes if n not in graph.labels]
        raise ValueError(f"snapshot {graph.snapshot_index} has unlabeled nodes, e.g. {missing[:3]}")


def eva_dendrogram(graph: AttributedSnapshotGraph, config: EvaConfig = EvaConfig(),
                   backend: str = "auto") -> list[Partition]:
    """Partition of the original nodes after every level that changed something.

    The last entry is the final result. Levels are computed until a local-moving
    phase makes no move or ``config.max_passes`` levels have run.
    """
    _check_graph(graph)
    _, sweep = get_sweep(backend)
    nodes = graph.nodes
    label_values = sorted({str(v) for v in graph.labels.values()})
    label_idx = {v: j for j, v in enumerate(label_values)}

    _, indptr, indices, weights = graph.adjacency_arrays()
    n = len(nodes)
    # super-node self-loops never enter the move gain, so only degrees are tracked
    degree = np.bincount(np.repeat(np.arange(n), np.diff(indptr)), weights, n)
    node_hist = np.zeros((n, len(label_values)), dtype=np.int64)
    node_hist[np.arange(n), [label_idx[str(graph.labels[v])] for v in nodes]] = 1
    node_size = np.ones(n, dtype=np.int64)
    membership = np.arange(n, dtype=np.int64)

    m = float(graph.total_weight)
    c1, c2 = 1.0 / m, 1.0 / (2.0 * m * m)
    rng = np.random.default_rng(config.seed)
    levels: list[Partition] = []

    for level in range(config.max_passes):
        k = len(degree)
        comm = np.arange(k, dtype=np.int64)
        comm_tot = degree.copy()
        comm_hist = node_hist.copy()
        comm_size = node_size.copy()
        state = np.array([float(np.sum(node_hist.max(axis=1) / node_size)), float(k)])
        total_moves = 0
        for _ in range(MAX_SWEEPS):
            order = rng.permutation(k).astype(np.int64)
            moves = sweep(order, indptr, indices, weights, degree, node_hist, node_size,
                          comm, comm_tot, comm_hist, comm_size, state,
                          c1, c2, config.alpha, config.min_gain, n, config.weighted_purity)
            total_moves += moves
            if moves == 0:
                break
        else:
            logger.warning("local moving hit the sweep cap at level %d", level)
        if total_moves == 0:
            break

        _, new_id = np.unique(comm, return_inverse=True)
        new_id = new_id.astype(np.int64)
        n_new = int(new_id.max()) + 1
        membership = new_id[membership]
        levels.append(_to_partition(graph, membership))

        row_of = np.repeat(np.arange(k), np.diff(indptr))
        src, dst = new_id[row_of], new_id[indices]
        inter = src != dst
        adj = sparse.coo_matrix((weights[inter], (src[inter], dst[inter])), shape=(n_new, n_new)).tocsr()
        adj.sum_duplicates()
        adj.sort_indices()
        indptr = adj.indptr.astype(np.int64)
        indices = adj.indices.astype(np.int64)
        weights = adj.data.astype(np.float64)
        degree = np.bincount(new_id, degree, n_new)
        hist = np.zeros((n_new, node_hist.shape[1]), dtype=np.int64)
        np.add.at(hist, new_id, node_hist)
        node_hist = hist
        node_size = np.bincount(new_id, node_size, n_new).astype(np.int64)
        if n_new == 1:
            break

    if not levels:
        levels.append(_to_partition(graph, membership))
    return levels


def _to_partition(graph: AttributedSnapshotGraph, membership: np.ndarray) -> Partition:
    groups: dict[int, list[str]] = {}
    for node, c in zip(graph.nodes, membership.tolist()):
        groups.setdefault(c, []).append(node)
    return Partition.from_groups(graph.snapshot_index, groups.values())


def eva_partition(graph: AttributedSnapshotGraph, config: EvaConfig = EvaConfig(),
                  backend: str = "auto") -> Partition:
    """Labeled community detection on one snapshot; deterministic given ``config.seed``."""
    return eva_dendrogram(graph, config, backend)[-1]
