"""End-to-end run: build -> label -> partition -> classify -> lifecycle -> valence."""
from __future__ import annotations

import hashlib
import json
import logging
import os
import platform
import shutil
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .community.eva import eva_partition
from .community.kernels import get_sweep
from .community.metrics import Partition
from .config import PipelineConfig
from .echo import classify, scatter_data, write_assessments, write_scatter
from .graph import build_snapshots, degree_stats
from .io import read_events, read_score_sidecar, write_csv
from .leaning import label_network
from .lifecycle import build_chains, match_communities, one_time_users, stabilize_membership, write_stability
from .valence import extract_keywords, group_valence, load_lexicon, write_valence

logger = logging.getLogger(__name__)


REPORT_FILES = frozenset({
    "rejects.txt", "snapshots.csv", "partitions.csv", "assessments.csv", "scatter.csv",
    "stability.csv", "chains.csv", "valence.csv", "manifest.json",
})


class PipelineError(RuntimeError):
    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class RunResult:
    output_dir: Path
    network: object = None
    partitions: dict = field(default_factory=dict)
    assessments: list = field(default_factory=list)
    chains: list = field(default_factory=list)
    valence: object = None
    notices: list = field(default_factory=list)


class _Stage:
    def __init__(self):
        self.name = "setup"

    def __call__(self, name):
        self.name = name
        logger.info("stage: %s", name)


def _detect(network, config: PipelineConfig, threads: int) -> dict[int, Partition]:
    todo = [s for s in network if s.edges]
    for s in network:
        if not s.edges:
            logger.warning("snapshot %d has no labeled edges; no communities", s.snapshot_index)
    eva = config.eva_config

    def one(snap):
        return snap.snapshot_index, eva_partition(snap, eva, config.backend)

    if threads > 1 and len(todo) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, todo))
    else:
        results = [one(s) for s in todo]
    return dict(results)


def _lifecycle(network, events, partitions, assessments, config: PipelineConfig):
    filt = config.activity_filter
    drop = one_time_users(events, filt.min_contributions) if filt.min_contributions > 1 else set()
    comm_sets = []
    for snap in network:
        part = partitions.get(snap.snapshot_index)
        comms = {}
        if part is not None:
            for cid, members in part.communities.items():
                if len(members) >= config.lifecycle_min_size:
                    comms[cid] = members - drop
        comm_sets.append(comms)
    if filt.require_adjacent_overlap:
        comm_sets = stabilize_membership(comm_sets, [s.nodes for s in network])
    matches = [
        match_communities(comm_sets[t], comm_sets[t + 1], filt.match_threshold)
        for t in range(len(comm_sets) - 1)
    ]
    is_ec = {(a.snapshot_index, a.community_id): a.is_ec for a in assessments}
    ids = [sorted(c for c, m in comms.items() if m) for comms in comm_sets]
    return build_chains(matches, is_ec, ids)


def _valence(network, events, partitions, assessments, config: PipelineConfig):
    lexicon = load_lexicon(config.lexicon)
    is_ec = {(a.snapshot_index, a.community_id): a.is_ec for a in assessments}
    docs, seen, sources = [], set(), set()
    for ev in events:
        if ev.keywords is None and not ev.text:
            continue
        if ev.doc_id is not None:
            if ev.doc_id in seen:
                continue
            seen.add(ev.doc_id)
        t = network.window_of(ev.timestamp)
        part = partitions.get(t)
        if part is None or ev.actor not in part.assignment:
            continue
        if ev.keywords is not None:
            keywords, src = ev.keywords, "provided"
        else:
            keywords, src = extract_keywords(ev.text), "fallback"
        sources.add(src)
        membership = "ec" if is_ec[(t, part.assignment[ev.actor])] else "not_ec"
        docs.append((ev.topic_id if ev.topic_id is not None else "all", membership, keywords))
    source = sources.pop() if len(sources) == 1 else ("mixed" if sources else "none")
    return group_valence(docs, lexicon, config.valence_pooling, source)


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def run(config: PipelineConfig, threads: int | None = None) -> RunResult:
    """Execute every stage and write the report bundle into ``config.output_dir``.

    Outputs are staged in a temporary directory and only moved into place when
    all stages succeed. Raises PipelineError naming the failing stage.
    """
    threads = threads or os.cpu_count() or 1
    out_dir = Path(config.output_dir)
    stage = _Stage()
    out_dir.mkdir(parents=True, exist_ok=True)
    staging = Path(tempfile.mkdtemp(prefix=".echotrack-", dir=out_dir))
    result = RunResult(out_dir)
    try:
        stage("validate")
        config.check_files()
        backend, _ = get_sweep(config.backend)

        stage("build")
        events, rejects = read_events(config.events, staging / "rejects.txt")
        network = build_snapshots(events, config.window_length, config.origin, config.topic)

        stage("label")
        overrides = read_score_sidecar(config.labels) if config.labels else None
        network = label_network(network, events, config.leaning_thresholds, config.leaning_scope, overrides)
        result.network = network
        write_csv(
            staging / "snapshots.csv",
            ["snapshot", "start", "end", "node_count", "edge_count", "average_degree", "density"],
            (
                (s.snapshot_index, s.window[0], s.window[1], d.node_count, d.edge_count,
                 d.average_degree, d.density)
                for s in network for d in [degree_stats(s)]
            ),
        )

        stage("partition")
        partitions = _detect(network, config, threads)
        result.partitions = partitions
        write_csv(
            staging / "partitions.csv",
            ["snapshot_index", "user_id", "community_id"],
            ((t, u, partitions[t].assignment[u]) for t in sorted(partitions) for u in sorted(partitions[t].assignment)),
        )

        stage("classify")
        assessments = []
        for t in sorted(partitions):
            assessments.extend(classify(partitions[t], network[t], config.ec_thresholds, config.conductance_mode))
        result.assessments = assessments
        write_assessments(staging / "assessments.csv", assessments)
        write_scatter(staging / "scatter.csv", assessments)
        _, scatter_meta = scatter_data(assessments, config.ec_thresholds) if assessments else (None, {})

        stage("lifecycle")
        if len(network) >= 2:
            chains = _lifecycle(network, events, partitions, assessments, config)
        else:
            chains = []
            result.notices.append("lifecycle skipped: fewer than two snapshots")
        result.chains = chains
        write_stability(staging / "stability.csv", chains)
        write_csv(
            staging / "chains.csv",
            ["chain_id", "step", "snapshot", "community", "is_ec"],
            ((c.chain_id, k, t, cid, ec) for c in chains for k, (t, cid, ec) in enumerate(c.steps)),
        )

        stage("valence")
        if config.lexicon:
            report = _valence(network, events, partitions, assessments, config)
            result.valence = report
            write_valence(staging / "valence.csv", report, (config.valence_band_low, config.valence_band_high))
        else:
            report = None
            result.notices.append("valence skipped: no lexicon configured")

        stage("manifest")
        for note in result.notices:
            logger.info(note)
        outputs = sorted(p.name for p in staging.iterdir())
        manifest = {
            "software": {"name": "echotrack", "version": __version__, "sweep_backend": backend},
            "config": config.to_dict(),
            "formulas": {
                "conductance_mode": config.conductance_mode,
                "purity_aggregation": config.purity_aggregation,
                "leaning_scope": config.leaning_scope,
                "valence_pooling": config.valence_pooling,
                "valence_keyword_source": report.keyword_source if report else None,
                "membership_stabilization": "adjacent snapshot node sets",
            },
            "seed": config.eva_seed,
            "scatter_boundaries": scatter_meta,
            "counts": {
                "events": len(events),
                "rejected_lines": len(rejects),
                "snapshots": len(network),
                "communities": len(assessments),
                "echo_chambers": sum(a.is_ec for a in assessments),
                "chains": len(chains),
            },
            "notices": result.notices,
            "outputs": {name: _sha256(staging / name) for name in outputs},
            "created": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
            "python": platform.python_version(),
        }
        (staging / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")

        for p in staging.iterdir():
            os.replace(p, out_dir / p.name)
        for name in REPORT_FILES - set(outputs) - {"manifest.json"}:
            (out_dir / name).unlink(missing_ok=True)
    except Exception as exc:
        raise PipelineError(stage.name, exc) from exc
    finally:
        shutil.rmtree(staging, ignore_errors=True)
    return result
