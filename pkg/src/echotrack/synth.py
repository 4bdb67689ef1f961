"""Synthetic dynamic attributed networks with planted polarized blocks.

Every snapshot is an independent stochastic block model draw. Between
snapshots each user stays in its block with the block's persistence
probability and otherwise moves to one of the other blocks, chosen uniformly.
Labels follow the current block, flipped to a random other label with
probability ``label_noise``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .echo import EcThresholds, conductance_from_volumes
from .graph import LABELS, AttributedSnapshotGraph, DynamicNetwork, InteractionEvent

LABEL_SCORE = {"anti": 0.0, "neutral": 0.5, "pro": 1.0}
MAX_REDRAWS = 10

# toy vocabulary so the valence stage has something to score on synthetic data
SYNTH_LEXICON = {
    "freedom": 0.9, "safety": 0.8, "rights": 0.75, "community": 0.7, "vote": 0.6,
    "policy": 0.5, "law": 0.5, "debate": 0.45, "crisis": 0.2, "attack": 0.1,
    "violence": 0.05, "corrupt": 0.15,
}
_VOCAB = {
    "pro": ("freedom", "rights", "vote", "debate", "attack", "gunsmith"),
    "anti": ("safety", "community", "policy", "crisis", "violence", "marchers"),
    "neutral": ("law", "policy", "debate", "vote", "corrupt", "weather"),
}


@dataclass(frozen=True)
class Block:
    size: int
    label: str
    intra_p: float
    persistence: float = 1.0

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("block size must be >= 1")
        if self.label not in LABELS:
            raise ValueError(f"block label must be one of {LABELS}")
        for name in ("intra_p", "persistence"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must be in [0, 1]")


@dataclass(frozen=True)
class SynthConfig:
    blocks: tuple[Block, ...]
    snapshots: int = 5
    inter_p: float = 0.01
    seed: int = 0
    label_noise: float = 0.0
    window_length: int = 15_768_000  # half a year of seconds
    origin: int = 1_483_228_800  # 2017-01-01T00:00:00Z
    topics: int = 3

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        if self.snapshots < 2:
            raise ValueError("need at least 2 snapshots")
        if not self.blocks:
            raise ValueError("need at least one block")
        if not 0.0 <= self.inter_p <= 1.0 or not 0.0 <= self.label_noise <= 1.0:
            raise ValueError("probabilities must be in [0, 1]")
        if self.window_length <= 0:
            raise ValueError("window_length must be positive")

    @property
    def n_nodes(self) -> int:
        return sum(b.size for b in self.blocks)


@dataclass(frozen=True)
class GroundTruth:
    membership: tuple[dict[str, int], ...]  # per snapshot: user -> planted block
    block_labels: tuple[str, ...]
    planted_is_ec: tuple[bool, ...]
    labels: tuple[dict[str, str], ...] = field(default=())

    def block_members(self, t: int, block: int) -> frozenset:
        return frozenset(u for u, b in self.membership[t].items() if b == block)


def node_ids(n: int) -> list[str]:
    width = len(str(n - 1))
    return [f"u{i:0{width}d}" for i in range(n)]


def planted_ec_expectation(
    config: SynthConfig, thresholds: EcThresholds = EcThresholds(), mode: str = "paper"
) -> tuple[bool, ...]:
    """EC status each block should have, judged from its expected edge volumes.

    Expected internal weight is ``intra_p * s(s-1)/2`` and boundary weight
    ``inter_p * s (N - s)``; expected purity is ``1 - label_noise``.
    """
    n = config.n_nodes
    out = []
    for b in config.blocks:
        internal = b.intra_p * b.size * (b.size - 1) / 2
        boundary = config.inter_p * b.size * (n - b.size)
        cond, _ = conductance_from_volumes(internal, boundary, mode)
        out.append(thresholds.is_ec(b.size, max(1.0 - config.label_noise, 1.0 / len(LABELS)), cond))
    return tuple(out)


def _draw_edges(rng, block_of: np.ndarray, intra: np.ndarray, inter_p: float):
    n = len(block_of)
    iu, ju = np.triu_indices(n, 1)
    same = block_of[iu] == block_of[ju]
    p = np.where(same, intra[block_of[iu]], inter_p)
    keep = rng.random(len(iu)) < p
    return iu[keep], ju[keep]


def generate(config: SynthConfig, thresholds: EcThresholds = EcThresholds(),
             mode: str = "paper") -> tuple[DynamicNetwork, GroundTruth]:
    """Draw the labeled dynamic network and its planted truth; fully determined by ``config.seed``."""
    rng = np.random.default_rng(config.seed)
    ids = node_ids(config.n_nodes)
    k = len(config.blocks)
    intra = np.array([b.intra_p for b in config.blocks])
    persistence = np.array([b.persistence for b in config.blocks])
    block_of = np.repeat(np.arange(k), [b.size for b in config.blocks])

    snaps, memberships, all_labels = [], [], []
    for t in range(config.snapshots):
        if t > 0 and k > 1:
            leave = rng.random(len(block_of)) >= persistence[block_of]
            # shift by 1..k-1 so a leaver always lands in a different block
            shift = rng.integers(1, k, size=len(block_of))
            block_of = np.where(leave, (block_of + shift) % k, block_of)
        for _ in range(MAX_REDRAWS):
            src, dst = _draw_edges(rng, block_of, intra, config.inter_p)
            if len(src):
                break
        else:
            raise RuntimeError(f"snapshot {t} stayed edgeless after {MAX_REDRAWS} draws")

        flip = rng.random(len(block_of)) < config.label_noise
        offset = rng.integers(1, len(LABELS), size=len(block_of))
        labels = {}
        for i, u in enumerate(ids):
            base = LABELS.index(config.blocks[block_of[i]].label)
            labels[u] = LABELS[(base + offset[i]) % len(LABELS)] if flip[i] else LABELS[base]

        edges = {(ids[a], ids[b]): 1 for a, b in zip(src.tolist(), dst.tolist())}
        present = {u for e in edges for u in e}
        start = config.origin + t * config.window_length
        snaps.append(AttributedSnapshotGraph(
            t, (start, start + config.window_length), tuple(present), edges,
            {u: labels[u] for u in present},
        ))
        memberships.append({u: int(block_of[i]) for i, u in enumerate(ids)})
        all_labels.append(labels)

    truth = GroundTruth(
        tuple(memberships),
        tuple(b.label for b in config.blocks),
        planted_ec_expectation(config, thresholds, mode),
        tuple(all_labels),
    )
    return DynamicNetwork(tuple(snaps), topic="synthetic"), truth


def to_events(network: DynamicNetwork, config: SynthConfig) -> list[InteractionEvent]:
    """Replay a labeled synthetic network as reply events.

    Each edge becomes one reply with a random direction and timestamp inside its
    window. Each user also gets one self-reply post per snapshot carrying a topic
    and keywords, so every user has a scored post there. Rebuilding snapshots
    from these events gives back the same graphs.
    """
    rng = np.random.default_rng([config.seed, 1])
    events = []
    for snap in network:
        start, end = snap.window
        length = end - start
        for (u, v) in snap.edges:
            actor, target = (u, v) if rng.random() < 0.5 else (v, u)
            ts = start + int(rng.integers(0, length))
            events.append(InteractionEvent(actor, target, ts, LABEL_SCORE[snap.labels[actor]]))
        for u in snap.nodes:
            label = snap.labels[u]
            ts = start + int(rng.integers(0, length))
            words = rng.choice(len(_VOCAB[label]), size=3, replace=False)
            events.append(InteractionEvent(
                u, u, ts, LABEL_SCORE[label],
                doc_id=f"d{snap.snapshot_index}-{u}",
                topic_id=f"topic{int(rng.integers(0, config.topics))}",
                keywords=tuple(_VOCAB[label][w] for w in sorted(words.tolist())),
            ))
    events.sort(key=lambda e: (e.timestamp, e.actor, e.target))
    return events


def random_config(seed: int, n_blocks: Sequence[int] = (2, 4), size: Sequence[int] = (50, 200),
                  intra_p: Sequence[float] = (0.2, 0.4), inter_p: Sequence[float] = (0.0, 0.02),
                  noise: Sequence[float] = (0.0, 0.05), snapshots: int = 5,
                  persistence: float = 1.0) -> SynthConfig:
    """A config drawn uniformly from the given ranges; labels alternate pro/anti."""
    rng = np.random.default_rng([seed, 7])
    k = int(rng.integers(n_blocks[0], n_blocks[1] + 1))
    blocks = tuple(
        Block(int(rng.integers(size[0], size[1] + 1)), ("pro", "anti")[i % 2],
              float(rng.uniform(*intra_p)), persistence)
        for i in range(k)
    )
    return SynthConfig(blocks, snapshots, float(rng.uniform(*inter_p)), seed, float(rng.uniform(*noise)))
