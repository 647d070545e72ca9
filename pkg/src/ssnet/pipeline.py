"""Stage functions and the end-to-end run: ingest -> filter -> build -> analyze -> report.

Each stage reads and writes the documented artifact files so it can also be
run on its own from the command line.
"""

from __future__ import annotations

import hashlib
import json
import logging
import shutil
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .analyze import AnalysisReport, run_analysis
from .build import (
    BotFilterConfig,
    BotRemoval,
    SsnConfig,
    build_coauthorship,
    build_ssn,
    filter_bots,
    write_bot_audit,
)
from .clients import FixtureCitationClient, FixtureMetadataClient
from .config import PipelineConfig
from .graphio import read_graphml, write_edge_list, write_graphml
from .ingest import (
    enrich_citations,
    enrich_metadata,
    read_mentions,
    write_events,
    write_papers,
)
from .model import MentionEvent, MultiRelationalGraph, PaperRecord

logger = logging.getLogger(__name__)

EVENTS_FILE = "events.jsonl"
FILTERED_FILE = "events_filtered.jsonl"
PAPERS_FILE = "papers.jsonl"
GRAPH_FILE = "graph.graphml"
AUDIT_FILE = "bot_audit.csv"
MANIFEST_FILE = "manifest.json"


class StageError(Exception):
    """A fatal failure in a named stage. ``code`` is the CLI exit status."""

    def __init__(self, stage: str, message: str, code: int = 2):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage
        self.code = code


def sha256_file(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


@dataclass
class IngestResult:
    events: list[MentionEvent]
    papers: dict[str, PaperRecord]
    skipped_lines: int


def ingest_stage(
    mentions: Path,
    metadata: Path | None = None,
    citations: Path | None = None,
    jobs: int = 1,
) -> IngestResult:
    try:
        events, skipped = read_mentions(mentions)
    except OSError as exc:
        raise StageError("ingest", f"cannot read mentions: {exc}") from exc
    if not events:
        raise StageError("ingest", f"no events in {mentions} ({skipped} malformed lines)")
    ids = {e.paper_id for e in events}
    try:
        if metadata is not None:
            papers = enrich_metadata(ids, FixtureMetadataClient.from_file(metadata), max_workers=jobs)
        else:
            papers = {pid: PaperRecord.stub(pid) for pid in sorted(ids)}
        if citations is not None:
            papers = enrich_citations(papers, FixtureCitationClient.from_file(citations), max_workers=jobs)
    except (OSError, ValueError, KeyError) as exc:
        raise StageError("ingest", f"enrichment input error: {exc}") from exc
    return IngestResult(events, papers, skipped)


def filter_stage(events: list[MentionEvent], cfg: BotFilterConfig) -> tuple[list[MentionEvent], list[BotRemoval]]:
    kept, removed = filter_bots(events, cfg)
    if not kept:
        raise StageError("filter-bots", "every event was removed by the bot filter")
    return kept, removed


def build_stage(
    events: list[MentionEvent],
    papers: dict[str, PaperRecord] | None,
    cfg: SsnConfig,
    jobs: int = 1,
) -> MultiRelationalGraph:
    """Vertices are the papers mentioned in ``events``; unknown papers become stubs."""
    papers = papers or {}
    graph = MultiRelationalGraph()
    for pid in sorted({e.paper_id for e in events}):
        graph.add_paper(papers.get(pid) or PaperRecord.stub(pid))
    graph.add_relation(build_ssn(events, cfg, jobs=jobs))
    graph.add_relation(build_coauthorship(graph.vertices))
    graph.validate()
    return graph


def write_graph_outputs(graph: MultiRelationalGraph, out: Path) -> None:
    write_graphml(graph, out / GRAPH_FILE)
    for name, es in graph.edge_family.items():
        write_edge_list(es, out / f"edges_{name}.csv")


def analyze_stage(graph: MultiRelationalGraph, cfg: PipelineConfig) -> AnalysisReport:
    if cfg.relation not in graph.edge_family:
        raise StageError("analyze", f"relation {cfg.relation!r} not in graph ({sorted(graph.edge_family)})")
    try:
        return run_analysis(
            graph,
            relation=cfg.relation,
            resolutions=cfg.resolutions,
            attributes=cfg.attributes,
            seed=cfg.seed,
            jobs=cfg.jobs,
            weighted_centrality=cfg.weighted_centrality,
        )
    except ValueError as exc:
        raise StageError("analyze", str(exc)) from exc


def analyze_graph_file(path: Path, cfg: PipelineConfig, out: Path) -> AnalysisReport:
    try:
        graph = read_graphml(path)
    except (OSError, ValueError) as exc:
        raise StageError("analyze", f"cannot load graph: {exc}") from exc
    report = analyze_stage(graph, cfg)
    out.mkdir(parents=True, exist_ok=True)
    report.write(out)
    return report


def _prepare_out(out: Path) -> Path:
    if out.exists():
        if not out.is_dir():
            raise StageError("setup", f"{out} exists and is not a directory")
        if any(out.iterdir()) and not (out / MANIFEST_FILE).exists():
            raise StageError("setup", f"{out} is not empty and is not a previous run directory")
    out.parent.mkdir(parents=True, exist_ok=True)
    return Path(tempfile.mkdtemp(prefix=f".{out.name}.", dir=out.parent))


def run_pipeline(cfg: PipelineConfig) -> AnalysisReport:
    """Run every stage and write the run directory atomically.

    Outputs are staged in a sibling temporary directory and moved into place
    only on success, so a failed run leaves no partial results.
    """
    cfg.validate()
    if cfg.mentions is None or cfg.out is None:
        raise StageError("setup", "both a mentions input and an output directory are required", 1)
    out = Path(cfg.out)
    tmp = _prepare_out(out)
    stage = "ingest"
    try:
        ing = ingest_stage(cfg.mentions, cfg.metadata, cfg.citations, cfg.jobs)
        write_events(ing.events, tmp / EVENTS_FILE)
        write_papers(ing.papers, tmp / PAPERS_FILE)

        stage = "filter-bots"
        kept, removed = filter_stage(ing.events, cfg.bot_filter)
        write_events(kept, tmp / FILTERED_FILE)
        write_bot_audit(removed, tmp / AUDIT_FILE)

        stage = "build"
        graph = build_stage(kept, ing.papers, cfg.ssn, cfg.jobs)
        write_graph_outputs(graph, tmp)

        stage = "analyze"
        report = analyze_stage(graph, cfg)
        report.write(tmp)

        stage = "report"
        inputs = {
            k: sha256_file(p)
            for k, p in (("mentions", cfg.mentions), ("metadata", cfg.metadata), ("citations", cfg.citations))
            if p is not None
        }
        counts = {
            "lines_skipped": ing.skipped_lines,
            "events_read": len(ing.events),
            "events_after_bot_filter": len(kept),
            "users_removed": len({r.user_id for r in removed}),
            "vertices": len(graph.vertices),
            "edges": {name: len(es) for name, es in graph.edge_family.items()},
        }
        outputs = {p.name: sha256_file(p) for p in sorted(tmp.iterdir()) if p.is_file()}
        manifest = {
            "config": cfg.describe(),
            "seed": cfg.seed,
            "inputs": inputs,
            "counts": counts,
            "outputs": outputs,
        }
        (tmp / MANIFEST_FILE).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    except StageError:
        shutil.rmtree(tmp, ignore_errors=True)
        raise
    except Exception as exc:
        shutil.rmtree(tmp, ignore_errors=True)
        raise StageError(stage, f"internal error: {type(exc).__name__}: {exc}", 3) from exc

    if out.exists():
        shutil.rmtree(out)
    tmp.rename(out)
    return report
