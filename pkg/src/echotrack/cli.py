"""Command line interface: ``init``, ``run``, ``synth`` and ``inspect``."""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from .config import TEMPLATE, ConfigError, load_config
from .echo import CONDUCTANCE_MODES
from .io import write_events
from .pipeline import PipelineError, run
from .synth import SYNTH_LEXICON, Block, SynthConfig, generate, to_events

log = logging.getLogger("echotrack")


def _cmd_init(args) -> int:
    path = Path(args.output)
    if path.exists() and not args.force:
        print(f"{path} exists; use --force to overwrite", file=sys.stderr)
        return 1
    path.write_text(TEMPLATE, encoding="utf-8")
    print(f"wrote {path}")
    return 0


def _cmd_run(args) -> int:
    try:
        config = load_config(args.config)
        config = config.with_overrides(eva_seed=args.seed, conductance_mode=args.conductance_mode)
        config.check_files()
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        result = run(config, threads=args.threads)
    except PipelineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    n_ec = sum(a.is_ec for a in result.assessments)
    print(f"{len(result.network)} snapshots, {len(result.assessments)} communities, "
          f"{n_ec} echo chambers, {len(result.chains)} chains -> {result.output_dir}")
    for note in result.notices:
        print(f"notice: {note}")
    return 0


def _parse_block(text: str) -> Block:
    """``size:label:intra_p[:persistence]``"""
    parts = text.split(":")
    if len(parts) not in (3, 4):
        raise argparse.ArgumentTypeError(f"bad block {text!r}; want size:label:intra_p[:persistence]")
    try:
        return Block(int(parts[0]), parts[1], float(parts[2]), float(parts[3]) if len(parts) == 4 else 1.0)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _cmd_synth(args) -> int:
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    blocks = args.block or [Block(100, "pro", 0.3), Block(100, "anti", 0.3)]
    cfg = SynthConfig(tuple(blocks), args.snapshots, args.inter_p, args.seed, args.label_noise,
                      window_length=args.window_length)
    network, truth = generate(cfg)
    write_events(out / "events.jsonl", to_events(network, cfg))
    (out / "lexicon.tsv").write_text("".join(f"{w}\t{v}\n" for w, v in sorted(SYNTH_LEXICON.items())), encoding="utf-8")
    (out / "truth.json").write_text(json.dumps({
        "block_labels": truth.block_labels,
        "planted_is_ec": truth.planted_is_ec,
        "membership": [dict(sorted(m.items())) for m in truth.membership],
    }, indent=1) + "\n", encoding="utf-8")
    config_text = TEMPLATE.replace("lexicon =\n", "lexicon = lexicon.tsv\n").replace(
        "window_length = 182d", f"window_length = {cfg.window_length}").replace(
        "origin =\n", f"origin = {cfg.origin}\n")
    (out / "config.txt").write_text(config_text, encoding="utf-8")
    print(f"wrote events.jsonl, lexicon.tsv, truth.json, config.txt to {out}")
    return 0


def _cmd_inspect(args) -> int:
    if args.assessments:
        path = Path(args.assessments)
    else:
        try:
            path = Path(load_config(args.config).output_dir) / "assessments.csv"
        except ConfigError as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return 2
    try:
        with open(path, encoding="utf-8") as fh:
            rows = [r for r in csv.DictReader(fh) if int(r["snapshot"]) == args.snapshot]
    except OSError as exc:
        print(f"cannot read {path}: {exc}", file=sys.stderr)
        return 1
    if not rows:
        print(f"no communities for snapshot {args.snapshot}")
        return 1
    print(f"snapshot {args.snapshot}: {len(rows)} communities")
    print(f"{'community':>9} {'size':>6} {'purity':>7} {'conduct.':>8}  EC")
    for r in sorted(rows, key=lambda r: -int(r["size"])):
        print(f"{r['community']:>9} {r['size']:>6} {float(r['purity']):7.3f} "
              f"{float(r['conductance']):8.3f}  {'yes' if r['is_ec'] == 'true' else '-'}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="echotrack", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("init", help="write a documented config template")
    s.add_argument("--output", default="echotrack.conf")
    s.add_argument("--force", action="store_true")
    s.set_defaults(func=_cmd_init)

    s = sub.add_parser("run", help="run the whole pipeline")
    s.add_argument("--config", required=True)
    s.add_argument("--threads", type=int, default=None, help="parallel snapshots (default: cores)")
    s.add_argument("--seed", type=int, default=None, help="overrides eva_seed")
    s.add_argument("--conductance-mode", choices=CONDUCTANCE_MODES, default=None)
    s.set_defaults(func=_cmd_run)

    s = sub.add_parser("synth", help="write a synthetic dataset with planted echo chambers")
    s.add_argument("--output-dir", required=True)
    s.add_argument("--block", type=_parse_block, action="append",
                   help="size:label:intra_p[:persistence], repeatable (default two 100-user blocks)")
    s.add_argument("--snapshots", type=int, default=5)
    s.add_argument("--inter-p", type=float, default=0.01)
    s.add_argument("--label-noise", type=float, default=0.0)
    s.add_argument("--window-length", type=int, default=15_768_000)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=_cmd_synth)

    s = sub.add_parser("inspect", help="print one snapshot's community assessments")
    s.add_argument("--config")
    s.add_argument("--assessments", help="assessments.csv (instead of --config)")
    s.add_argument("--snapshot", type=int, default=0)
    s.set_defaults(func=_cmd_inspect)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "inspect" and not (args.config or args.assessments):
        parser.error("inspect needs --config or --assessments")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
