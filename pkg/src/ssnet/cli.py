"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 input error, 3 internal error.
Settings come from ``--config`` (YAML or JSON), then ``SSNET_*`` environment
variables, then flags; later sources win.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from . import pipeline as pl
from .build import write_bot_audit
from .config import ConfigError, PipelineConfig, apply_overrides, env_overrides, load_config
from .ingest import load_papers, mentions_to_stream_lines, read_events, write_events, write_papers
from .synth import (
    PreferentialConfig,
    SynthConfig,
    generate_metadata,
    generate_preferential_stream,
    generate_stream,
    write_ground_truth,
)

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="YAML/JSON pipeline config")
    p.add_argument("--out", type=Path, help="output directory")
    p.add_argument("--seed", type=int)
    p.add_argument("--jobs", type=int, help="worker cap; results do not depend on it")
    p.add_argument("--time-window", type=float, help="co-mention window in seconds")
    p.add_argument("--resolution", type=float, action="append", dest="resolutions",
                   help="modularity resolution (repeatable)")
    p.add_argument("--relation", help="relation to analyze (default: ssn)")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ssnet", description="Social scholarly co-mention network pipeline")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="full pipeline")
    _common(p)
    p.add_argument("--mentions", type=Path)
    p.add_argument("--metadata", type=Path, help="metadata fixture/cache (JSONL)")
    p.add_argument("--citations", type=Path, help="citation fixture/cache (JSONL)")

    p = sub.add_parser("ingest", help="parse mentions and enrich papers")
    _common(p)
    p.add_argument("--mentions", type=Path)
    p.add_argument("--metadata", type=Path)
    p.add_argument("--citations", type=Path)

    p = sub.add_parser("filter-bots", help="remove outlier users from an events file")
    _common(p)
    p.add_argument("--events", type=Path, required=True)

    p = sub.add_parser("build", help="build the multi-relational graph (GraphML)")
    _common(p)
    p.add_argument("--events", type=Path, required=True)
    p.add_argument("--papers", type=Path, help="papers.jsonl from ingest")

    p = sub.add_parser("analyze", help="analyze a GraphML graph")
    _common(p)
    p.add_argument("--graph", type=Path, required=True)

    p = sub.add_parser("synth", help="write a synthetic mention stream")
    _common(p)
    p.add_argument("--preferential", action="store_true",
                   help="preferential-attachment stream instead of planted blocks")
    p.add_argument("--n-papers", type=int, default=100)
    p.add_argument("--n-users", type=int)
    p.add_argument("--n-blocks", type=int, default=4)
    p.add_argument("--p-in", type=float, default=0.3)
    p.add_argument("--p-out", type=float, default=0.01)
    p.add_argument("--mentions-per-user", type=int, default=8)
    p.add_argument("--bots", type=int, default=0)
    p.add_argument("--bot-rate-multiplier", type=float, default=50.0)

    p = sub.add_parser("report", help="print a summary of a run directory")
    p.add_argument("run_dir", type=Path)
    p.add_argument("--top", type=int, default=10)
    return parser


def resolve_config(args: argparse.Namespace) -> PipelineConfig:
    cfg = load_config(args.config)
    cfg = apply_overrides(cfg, env_overrides())
    flags = {
        "out": args.out,
        "seed": args.seed,
        "jobs": args.jobs,
        "time_window": args.time_window,
        "resolutions": args.resolutions,
        "relation": args.relation,
    }
    for key in ("mentions", "metadata", "citations"):
        flags[key] = getattr(args, key, None)
    cfg = apply_overrides(cfg, flags)
    cfg.validate()
    return cfg


def _require_out(cfg: PipelineConfig) -> Path:
    if cfg.out is None:
        raise ConfigError("--out is required")
    cfg.out.mkdir(parents=True, exist_ok=True)
    return cfg.out


def cmd_run(args, cfg):
    report = pl.run_pipeline(cfg)
    print(f"wrote {cfg.out} ({len(report.partitions)} partitions)")


def cmd_ingest(args, cfg):
    if cfg.mentions is None:
        raise ConfigError("--mentions is required")
    out = _require_out(cfg)
    res = pl.ingest_stage(cfg.mentions, cfg.metadata, cfg.citations, cfg.jobs)
    write_events(res.events, out / pl.EVENTS_FILE)
    write_papers(res.papers, out / pl.PAPERS_FILE)
    print(f"{len(res.events)} events, {len(res.papers)} papers, {res.skipped_lines} malformed lines skipped")


def _load_events(path: Path, stage: str):
    try:
        return read_events(path)
    except (OSError, ValueError) as exc:
        raise pl.StageError(stage, str(exc)) from exc


def cmd_filter(args, cfg):
    out = _require_out(cfg)
    events = _load_events(args.events, "filter-bots")
    kept, removed = pl.filter_stage(events, cfg.bot_filter)
    write_events(kept, out / pl.FILTERED_FILE)
    write_bot_audit(removed, out / pl.AUDIT_FILE)
    print(f"kept {len(kept)} of {len(events)} events; removed {len({r.user_id for r in removed})} users")


def cmd_build(args, cfg):
    out = _require_out(cfg)
    events = _load_events(args.events, "build")
    if not events:
        raise pl.StageError("build", "no events")
    try:
        papers = load_papers(args.papers) if args.papers else None
    except (OSError, ValueError, KeyError) as exc:
        raise pl.StageError("build", f"cannot read papers: {exc}") from exc
    graph = pl.build_stage(events, papers, cfg.ssn, cfg.jobs)
    pl.write_graph_outputs(graph, out)
    sizes = ", ".join(f"{k}={len(v)}" for k, v in graph.edge_family.items())
    print(f"{len(graph.vertices)} vertices; edges: {sizes}")


def cmd_analyze(args, cfg):
    out = _require_out(cfg)
    report = pl.analyze_graph_file(args.graph, cfg, out)
    for res, part in sorted(report.partitions.items()):
        print(f"resolution {res:g}: {part.n_communities} communities, Q={part.modularity:.4f}")


def cmd_synth(args, cfg):
    out = _require_out(cfg)
    if args.preferential:
        pcfg = PreferentialConfig(seed=cfg.seed, time_window=int(cfg.ssn.time_window),
                                  **({"n_users": args.n_users} if args.n_users else {}))
        events, truth = generate_preferential_stream(pcfg), None
    else:
        scfg = SynthConfig(
            n_papers=args.n_papers,
            n_users=args.n_users if args.n_users is not None else 200,
            n_blocks=args.n_blocks,
            p_in=args.p_in,
            p_out=args.p_out,
            mentions_per_user=args.mentions_per_user,
            bot_count=args.bots,
            bot_rate_multiplier=args.bot_rate_multiplier,
            time_window=int(cfg.ssn.time_window),
            seed=cfg.seed,
        )
        events, truth = generate_stream(scfg)
    (out / "mentions.jsonl").write_text("".join(line + "\n" for line in mentions_to_stream_lines(events)))
    if truth is not None:
        write_ground_truth(truth, out / "ground_truth.csv")
        rows = generate_metadata(truth, seed=cfg.seed)
        (out / "metadata.jsonl").write_text("".join(json.dumps(r, sort_keys=True) + "\n" for r in rows))
    print(f"wrote {len(events)} mention records to {out / 'mentions.jsonl'}")


def _read_csv(path: Path) -> list[dict]:
    if not path.exists():
        return []
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def format_report(run_dir: Path, top: int = 10) -> str:
    if not (run_dir / "centrality.csv").exists():
        raise pl.StageError("report", f"{run_dir} does not look like a run directory")
    lines = [f"Run directory: {run_dir}"]
    manifest = run_dir / pl.MANIFEST_FILE
    if manifest.exists():
        m = json.loads(manifest.read_text())
        c = m["counts"]
        lines.append(
            f"events read {c['events_read']}, after bot filter {c['events_after_bot_filter']} "
            f"({c['users_removed']} users removed); vertices {c['vertices']}; "
            + ", ".join(f"{k} edges {v}" for k, v in c["edges"].items())
        )
    for row in _read_csv(run_dir / "power_law.csv"):
        lines.append(f"power law: gamma={row['gamma']} x_min={row['x_min']} KS={row['ks']} "
                     f"n_tail={row['n_tail']} ({row['status']})")
    for row in _read_csv(run_dir / "communities.csv"):
        lines.append(f"resolution {row['resolution']}: {row['n_communities']} communities, "
                     f"modularity {row['modularity']}")
    for row in _read_csv(run_dir / "path_metrics.csv"):
        lines.append(f"paths [{row['scope']}]: diameter {row['diameter']}, "
                     f"average path length {row['avg_path_length']}")

    groups = _read_csv(run_dir / "centrality_groups.csv")
    by_grouping: dict[str, list[dict]] = {}
    for row in groups:
        by_grouping.setdefault(row["grouping"], []).append(row)
    for grouping, rows in by_grouping.items():
        rows = sorted(rows, key=lambda r: -float(r["betweenness"]))[:top]
        width = max([len("Group")] + [len(r["group"]) for r in rows])
        lines.append("")
        lines.append(f"Top {len(rows)} groups by betweenness ({grouping})")
        lines.append(f"{'Group':<{width}}  {'Closeness':>10}  {'Betweenness':>12}  {'Normalized':>10}")
        for r in rows:
            lines.append(f"{r['group']:<{width}}  {r['closeness']:>10}  {r['betweenness']:>12}  "
                         f"{r['normalized_betweenness']:>10}")
    return "\n".join(lines)


def cmd_report(args):
    print(format_report(args.run_dir, args.top))


COMMANDS = {
    "run": cmd_run,
    "ingest": cmd_ingest,
    "filter-bots": cmd_filter,
    "build": cmd_build,
    "analyze": cmd_analyze,
    "synth": cmd_synth,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if args.command == "report":
            cmd_report(args)
        else:
            COMMANDS[args.command](args, resolve_config(args))
    except ConfigError as exc:
        print(f"ssnet: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except pl.StageError as exc:
        print(f"ssnet: {exc}", file=sys.stderr)
        return exc.code
    except Exception as exc:  # noqa: BLE001
        print(f"ssnet: [{args.command}] internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
