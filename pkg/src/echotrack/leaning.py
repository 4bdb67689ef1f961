"""Per-user leaning scores and their three-class discretization."""
from __future__ import annotations

import logging
import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping

from .graph import DynamicNetwork, InteractionEvent

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LeaningThresholds:
    lower: float = 0.3
    upper: float = 0.7

    def __post_init__(self):
        if not 0.0 <= self.lower < self.upper <= 1.0:
            raise ValueError(f"need 0 <= lower < upper <= 1, got {self.lower}, {self.upper}")


@dataclass(frozen=True)
class LeaningProfile:
    user_id: str
    score: float
    label: str
    post_count: int


def discretize(score: float, t: LeaningThresholds = LeaningThresholds()) -> str:
    """``anti`` at or below ``t.lower``, ``pro`` at or above ``t.upper``, else ``neutral``."""
    if not 0.0 <= score <= 1.0 or math.isnan(score):
        raise ValueError(f"leaning score {score} outside [0, 1]")
    if score <= t.lower:
        return "anti"
    if score >= t.upper:
        return "pro"
    return "neutral"


def compute_leaning(
    events: Iterable[InteractionEvent],
    window: tuple[int, int] | None = None,
    thresholds: LeaningThresholds = LeaningThresholds(),
) -> dict[str, LeaningProfile]:
    """Average the prediction scores of each user's posts.

    A post is any event the user authored (self-replies included). With
    ``window`` only posts with ``start <= timestamp < end`` count. Users with no
    scored post in scope are omitted.
    """
    scores: dict[str, list[float]] = defaultdict(list)
    unscored: set[str] = set()
    for ev in events:
        if not ev.actor:
            continue
        if window is not None and not window[0] <= ev.timestamp < window[1]:
            continue
        if ev.prediction_score is None:
            unscored.add(ev.actor)
            continue
        scores[ev.actor].append(ev.prediction_score)
    missing = unscored - scores.keys()
    if missing:
        logger.info("%d users have posts but no prediction scores; left unlabeled", len(missing))
    profiles = {}
    for user in sorted(scores):
        n = len(scores[user])
        # fsum is exact, so the mean does not depend on post order
        score = min(1.0, max(0.0, math.fsum(scores[user]) / n))
        profiles[user] = LeaningProfile(user, score, discretize(score, thresholds), n)
    return profiles


def profiles_from_scores(
    scores: Mapping[str, float], thresholds: LeaningThresholds = LeaningThresholds()
) -> dict[str, LeaningProfile]:
    """Profiles for externally supplied scores (post_count is recorded as 1)."""
    return {u: LeaningProfile(u, s, discretize(s, thresholds), 1) for u, s in sorted(scores.items())}


def label_network(
    network: DynamicNetwork,
    events: Iterable[InteractionEvent],
    thresholds: LeaningThresholds = LeaningThresholds(),
    scope: str = "global",
    overrides: Mapping[str, float] | None = None,
) -> DynamicNetwork:
    """Attach leaning labels to every snapshot and drop users left unlabeled.

    ``scope="global"`` gives each user one label from the whole corpus;
    ``scope="window"`` recomputes the leaning inside each snapshot window.
    ``overrides`` (user -> score) replace computed scores.
    """
    if scope not in ("global", "window"):
        raise ValueError(f"unknown leaning scope {scope!r}")
    events = list(events)
    override_profiles = profiles_from_scores(overrides or {}, thresholds)

    def labels_for(profiles):
        merged = {u: p.label for u, p in profiles.items()}
        merged.update({u: p.label for u, p in override_profiles.items()})
        return merged

    if scope == "global":
        labels = labels_for(compute_leaning(events, None, thresholds))
        snaps = [s.with_labels(labels) for s in network]
    else:
        snaps = [s.with_labels(labels_for(compute_leaning(events, s.window, thresholds))) for s in network]
    dropped = sum(len(a.nodes) - len(b.nodes) for a, b in zip(network, snaps))
    if dropped:
        logger.info("dropped %d unlabeled node occurrences before detection", dropped)
    return network.replace(snaps)
