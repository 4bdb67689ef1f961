"""Lexicon-based valence of keyword pools, grouped by topic and echo-chamber membership."""
from __future__ import annotations

import logging
import math
import re
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Mapping

from .io import write_csv

logger = logging.getLogger(__name__)

MEMBERSHIPS = ("ec", "not_ec")

# small English stop-word list for the fallback keyword extractor
STOP_WORDS = frozenset(
    """
    a about above after again against all am an and any are as at be because been before being below
    between both but by can could did do does doing down during each few for from further had has have
    having he her here hers herself him himself his how i if in into is it its itself just me more most
    my myself no nor not now of off on once only or other our ours ourselves out over own same she
    should so some such than that the their theirs them themselves then there these they this those
    through to too under until up very was we were what when where which while who whom why will with
    would you your yours yourself yourselves im dont didnt doesnt isnt its thats theyre youre ive
    """.split()
)

_TOKEN = re.compile(r"[a-z0-9']+")


class NoCoverageError(ValueError):
    """No keyword of the pool is in the lexicon, so valence is undefined."""


@dataclass(frozen=True)
class ValenceLexicon:
    entries: Mapping[str, float]

    def __post_init__(self):
        entries = {}
        for word, v in self.entries.items():
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"valence of {word!r} outside [0, 1]: {v}")
            entries[word.strip().lower()] = float(v)
        object.__setattr__(self, "entries", entries)

    def get(self, word: str):
        return self.entries.get(word.strip().lower())

    def __contains__(self, word):
        return word.strip().lower() in self.entries

    def __len__(self):
        return len(self.entries)


def load_lexicon(path) -> ValenceLexicon:
    """Read ``word<TAB>valence`` lines (NRC-VAD layout; extra columns ignored).

    A non-numeric first line is taken as a header. Out-of-range or malformed
    lines are skipped with a warning; for repeated words the last line wins.
    """
    entries: dict[str, float] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\r\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            try:
                if len(parts) < 2:
                    raise ValueError("expected word<TAB>valence")
                value = float(parts[1])
            except ValueError as exc:
                if lineno == 1:
                    continue
                logger.warning("%s:%d rejected: %s", path, lineno, exc)
                continue
            if not 0.0 <= value <= 1.0 or math.isnan(value):
                logger.warning("%s:%d rejected: valence %s outside [0, 1]", path, lineno, value)
                continue
            word = parts[0].strip().lower()
            if word in entries:
                logger.warning("%s:%d duplicate word %r, keeping the last value", path, lineno, word)
            entries[word] = value
    if not entries:
        raise ValueError(f"no valid lexicon entries in {path}")
    return ValenceLexicon(entries)


def extract_keywords(text: str) -> list[str]:
    """Fallback keywords: lowercase tokens without punctuation or stop words, first occurrence order."""
    seen = {}
    for tok in _TOKEN.findall(text.lower()):
        tok = tok.strip("'")
        if tok and tok not in STOP_WORDS and not tok.isdigit():
            seen.setdefault(tok, None)
    return list(seen)


def matched_values(keywords: Iterable[str], lexicon: ValenceLexicon) -> list[float]:
    """Valences of the distinct keywords that the lexicon knows."""
    values = []
    for word in sorted({k.strip().lower() for k in keywords}):
        v = lexicon.get(word)
        if v is not None:
            values.append(v)
    return values


def valence_score(keywords: Iterable[str], lexicon: ValenceLexicon) -> float:
    """Mean lexicon valence of the keywords found in the lexicon.

    Unknown words are ignored; duplicates count once. Raises NoCoverageError
    when nothing matches.
    """
    values = matched_values(keywords, lexicon)
    if not values:
        raise NoCoverageError("no keyword found in the lexicon")
    return math.fsum(values) / len(values)


@dataclass(frozen=True)
class ValenceRow:
    topic_id: str
    membership: str
    doc_count: int
    matched_keyword_count: int
    mean_valence: float | None


@dataclass(frozen=True)
class ValenceReport:
    rows: tuple[ValenceRow, ...]
    pooling: str = "pooled"
    keyword_source: str = "provided"


def valence_band(value: float | None, cuts: tuple[float, float] = (1 / 3, 2 / 3)) -> str | None:
    if value is None:
        return None
    if value < cuts[0]:
        return "negative"
    if value < cuts[1]:
        return "neutral"
    return "positive"


def group_valence(
    docs: Iterable[tuple[str, str, Iterable[str]]],
    lexicon: ValenceLexicon,
    pooling: str = "pooled",
    keyword_source: str = "provided",
) -> ValenceReport:
    """Valence per ``(topic, membership)`` group of documents.

    ``pooled`` divides the summed valences of every matched keyword in the group
    by their count; ``per_document`` averages the per-document scores of the
    documents that have any match.
    """
    if pooling not in ("pooled", "per_document"):
        raise ValueError(f"unknown pooling {pooling!r}")
    groups: dict[tuple[str, str], list[list[float]]] = defaultdict(list)
    for topic, membership, keywords in docs:
        if membership not in MEMBERSHIPS:
            raise ValueError(f"membership must be one of {MEMBERSHIPS}, got {membership!r}")
        groups[(str(topic), membership)].append(matched_values(keywords, lexicon))
    rows = []
    for (topic, membership), per_doc in sorted(groups.items()):
        matched = sum(len(v) for v in per_doc)
        if not matched:
            mean = None
        elif pooling == "pooled":
            mean = math.fsum(x for v in per_doc for x in v) / matched
        else:
            scores = [math.fsum(v) / len(v) for v in per_doc if v]
            mean = math.fsum(scores) / len(scores)
        rows.append(ValenceRow(topic, membership, len(per_doc), matched, mean))
    return ValenceReport(tuple(rows), pooling, keyword_source)


def write_valence(path, report: ValenceReport, cuts: tuple[float, float] = (1 / 3, 2 / 3)) -> None:
    write_csv(
        path,
        ["topic", "membership", "mean_valence", "doc_count", "matched_keyword_count", "band"],
        (
            (r.topic_id, r.membership, r.mean_valence, r.doc_count, r.matched_keyword_count,
             valence_band(r.mean_valence, cuts))
            for r in report.rows
        ),
    )
