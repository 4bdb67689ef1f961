"""Reading and writing the on-disk formats: JSONL events, TSV sidecars, CSV reports."""
from __future__ import annotations

import csv
import json
import logging
import math
from pathlib import Path
from typing import Iterable, Sequence

from .graph import InteractionEvent

logger = logging.getLogger(__name__)


def parse_event(record: dict) -> InteractionEvent:
    """Build an event from one decoded JSON object; raises ValueError on bad fields."""
    if not isinstance(record, dict):
        raise ValueError("record is not a JSON object")
    actor, target, ts = record.get("actor"), record.get("target"), record.get("timestamp")
    if actor in (None, "") or target in (None, ""):
        raise ValueError("missing actor or target")
    if isinstance(ts, bool) or not isinstance(ts, (int, float)) or not math.isfinite(ts):
        raise ValueError(f"bad timestamp {ts!r}")
    if isinstance(ts, float) and not ts.is_integer():
        raise ValueError(f"timestamp {ts!r} is not an integer")
    score = record.get("prediction_score")
    if score is not None:
        if isinstance(score, bool) or not isinstance(score, (int, float)):
            raise ValueError(f"bad prediction_score {score!r}")
        score = float(score)
    keywords = record.get("keywords")
    if keywords is not None:
        if not isinstance(keywords, list) or not all(isinstance(k, str) for k in keywords):
            raise ValueError("keywords must be a list of strings")
        keywords = tuple(k.lower() for k in keywords)
    opt = {}
    for key in ("doc_id", "topic_id", "text"):
        val = record.get(key)
        opt[key] = None if val is None else str(val)
    return InteractionEvent(str(actor), str(target), int(ts), score, keywords=keywords, **opt)


def read_events(path, rejects_path=None) -> tuple[list[InteractionEvent], list[str]]:
    """Read line-delimited JSON events.

    Malformed lines are skipped and described as ``line N: reason``; the
    diagnostics are also written to ``rejects_path`` when given.
    """
    events, rejects = [], []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                events.append(parse_event(json.loads(line)))
            except (ValueError, TypeError) as exc:
                rejects.append(f"line {lineno}: {exc}")
    if rejects:
        logger.warning("%d malformed event lines in %s", len(rejects), path)
    if rejects_path is not None:
        Path(rejects_path).write_text("".join(r + "\n" for r in rejects), encoding="utf-8")
    return events, rejects


def event_to_record(ev: InteractionEvent) -> dict:
    rec = {"actor": ev.actor, "target": ev.target, "timestamp": ev.timestamp}
    if ev.prediction_score is not None:
        rec["prediction_score"] = ev.prediction_score
    for key in ("doc_id", "topic_id", "text"):
        if getattr(ev, key) is not None:
            rec[key] = getattr(ev, key)
    if ev.keywords is not None:
        rec["keywords"] = list(ev.keywords)
    return rec


def write_events(path, events: Iterable[InteractionEvent]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for ev in events:
            fh.write(json.dumps(event_to_record(ev), sort_keys=True) + "\n")


def read_score_sidecar(path) -> dict[str, float]:
    """Read ``user_id<TAB>score`` lines; bad lines are logged and skipped."""
    scores = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            parts = line.split("\t")
            try:
                if len(parts) != 2:
                    raise ValueError("expected 2 tab-separated fields")
                score = float(parts[1])
                if not 0.0 <= score <= 1.0:
                    raise ValueError(f"score {score} outside [0, 1]")
            except ValueError as exc:
                logger.warning("%s line %d rejected: %s", path, lineno, exc)
                continue
            scores[parts[0]] = score
    return scores


def fmt(value) -> str:
    """Stable text form for CSV cells: repr-exact floats, empty for None."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])
