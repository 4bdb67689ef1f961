"""Flat ``key = value`` pipeline configuration."""
from __future__ import annotations

import re
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from .community.eva import EvaConfig
from .echo import CONDUCTANCE_MODES, EcThresholds
from .leaning import LeaningThresholds
from .lifecycle import ActivityFilterConfig


class ConfigError(ValueError):
    pass


_DURATION = re.compile(r"^\s*(\d+)\s*([smhdw]?)\s*$")
_UNITS = {"": 1, "s": 1, "m": 60, "h": 3600, "d": 86400, "w": 604800}


def parse_duration(text: str) -> int:
    """Seconds from ``"15768000"``, ``"182d"``, ``"26w"`` and the like."""
    m = _DURATION.match(str(text).lower())
    if not m:
        raise ConfigError(f"bad duration {text!r}")
    return int(m.group(1)) * _UNITS[m.group(2)]


def _bool(text: str) -> bool:
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"bad boolean {text!r}")


@dataclass(frozen=True)
class PipelineConfig:
    events: str
    window_length: int
    output_dir: str = "echotrack-out"
    lexicon: str | None = None
    labels: str | None = None
    origin: int | None = None
    topic: str = ""
    leaning_lower: float = 0.3
    leaning_upper: float = 0.7
    leaning_scope: str = "global"
    eva_alpha: float = 0.5
    eva_seed: int = 42
    eva_max_passes: int = 100
    eva_min_gain: float = 1e-7
    purity_aggregation: str = "weighted"
    conductance_mode: str = "paper"
    ec_conductance_max: float = 0.5
    ec_purity_min: float = 0.7
    ec_min_size: int = 20
    min_contributions: int = 2
    require_adjacent_overlap: bool = True
    match_threshold: float = 0.1
    lifecycle_min_size: int = 20
    valence_pooling: str = "pooled"
    valence_band_low: float = 1 / 3
    valence_band_high: float = 2 / 3
    backend: str = "auto"

    def __post_init__(self):
        if self.window_length <= 0:
            raise ConfigError("window_length must be positive")
        if self.leaning_scope not in ("global", "window"):
            raise ConfigError("leaning_scope must be global or window")
        if self.purity_aggregation not in ("weighted", "unweighted"):
            raise ConfigError("purity_aggregation must be weighted or unweighted")
        if self.conductance_mode not in CONDUCTANCE_MODES:
            raise ConfigError(f"conductance_mode must be one of {CONDUCTANCE_MODES}")
        if self.valence_pooling not in ("pooled", "per_document"):
            raise ConfigError("valence_pooling must be pooled or per_document")
        if not 0.0 <= self.valence_band_low <= self.valence_band_high <= 1.0:
            raise ConfigError("valence bands must satisfy 0 <= low <= high <= 1")
        if self.lifecycle_min_size < 1:
            raise ConfigError("lifecycle_min_size must be >= 1")
        try:
            self.leaning_thresholds, self.eva_config, self.ec_thresholds, self.activity_filter
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    @property
    def leaning_thresholds(self) -> LeaningThresholds:
        return LeaningThresholds(self.leaning_lower, self.leaning_upper)

    @property
    def eva_config(self) -> EvaConfig:
        return EvaConfig(self.eva_alpha, self.eva_seed, self.eva_max_passes, self.eva_min_gain,
                         self.purity_aggregation == "weighted")

    @property
    def ec_thresholds(self) -> EcThresholds:
        return EcThresholds(self.ec_conductance_max, self.ec_purity_min, self.ec_min_size)

    @property
    def activity_filter(self) -> ActivityFilterConfig:
        return ActivityFilterConfig(self.min_contributions, self.require_adjacent_overlap, self.match_threshold)

    def with_overrides(self, **kw) -> "PipelineConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})

    def check_files(self) -> None:
        for key in ("events", "lexicon", "labels"):
            path = getattr(self, key)
            if path is not None and not Path(path).is_file():
                raise ConfigError(f"{key} file not found: {path}")

    def to_dict(self) -> dict:
        return asdict(self)


_CONVERTERS = {
    "int": int, "float": float, "bool": _bool, "str": str,
}
_PATH_KEYS = ("events", "lexicon", "labels", "output_dir")


def _field_kind(f) -> str:
    t = str(f.type)
    for kind in ("bool", "int", "float"):
        if t.startswith(kind):
            return kind
    return "str"


def parse_config(text: str, base_dir: Path | str = ".") -> PipelineConfig:
    """Parse ``key = value`` lines; ``#`` starts a comment. Relative paths resolve against ``base_dir``."""
    known = {f.name: f for f in fields(PipelineConfig)}
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in known:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if value == "":
            continue
        try:
            if key == "window_length":
                values[key] = parse_duration(value)
            else:
                values[key] = _CONVERTERS[_field_kind(known[key])](value)
        except (ValueError, ConfigError) as exc:
            raise ConfigError(f"line {lineno}: bad value for {key}: {exc}") from None
    for key in ("events", "window_length"):
        if key not in values:
            raise ConfigError(f"missing required key {key!r}")
    base = Path(base_dir)
    for key in _PATH_KEYS:
        if key in values and not Path(values[key]).is_absolute():
            values[key] = str(base / values[key])
    return PipelineConfig(**values)


def load_config(path) -> PipelineConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text, path.parent)


TEMPLATE = """\
# echotrack pipeline configuration: one `key = value` per line, `#` comments.
# Relative paths are resolved against this file's directory.

# --- inputs -----------------------------------------------------------------
# JSON-lines reply events: actor, target, timestamp, [prediction_score, doc_id,
# topic_id, keywords, text]
events = events.jsonl
# optional word<TAB>valence lexicon; the valence stage is skipped without it
lexicon =
# optional user<TAB>score sidecar overriding computed leaning scores
labels =
output_dir = echotrack-out
topic =

# --- snapshots ----------------------------------------------------------------
# required, no default: seconds or a number with s/m/h/d/w suffix (182d ~ semester)
window_length = 182d
# window origin (epoch seconds); empty = earliest event
origin =

# --- leaning ------------------------------------------------------------------
# anti if score <= lower, pro if score >= upper, neutral otherwise
leaning_lower = 0.3
leaning_upper = 0.7
# global: one leaning per user; window: recomputed per snapshot
leaning_scope = global

# --- community detection (EVA) --------------------------------------------------
# weight on purity; 0 = plain Louvain modularity
eva_alpha = 0.5
eva_seed = 42
eva_max_passes = 100
eva_min_gain = 1e-7
# weighted: size-weighted mean of community purities; unweighted: plain mean
purity_aggregation = weighted
# auto, cython or python
backend = auto

# --- echo chamber thresholds ----------------------------------------------------
# paper: 2|E_out| / (2|E_in| + |E_out|); classic: |E_out| / (2|E_in| + |E_out|)
conductance_mode = paper
ec_conductance_max = 0.5
ec_purity_min = 0.7
ec_min_size = 20

# --- lifecycle ------------------------------------------------------------------
# users with fewer authored events are left out of the Jaccard sets
min_contributions = 2
# keep only members that are nodes of an adjacent snapshot
require_adjacent_overlap = true
# matches need jaccard strictly above this
match_threshold = 0.1
# communities smaller than this are not tracked
lifecycle_min_size = 20

# --- valence --------------------------------------------------------------------
# pooled: all matched keywords of a group; per_document: mean of document scores
valence_pooling = pooled
valence_band_low = 0.3333333333333333
valence_band_high = 0.6666666666666666
"""
