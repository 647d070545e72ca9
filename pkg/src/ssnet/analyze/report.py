"""The full analysis battery over one relation, and its on-disk report bundle."""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import networkx as nx

from .._parallel import chunked_map
from ..graphio import fmt, write_weighted_graphml
from ..model import MultiRelationalGraph, Partition, single_relation_view
from ..seeds import derive_seed
from .communities import detect_communities
from .compare import aggregate_by_attribute, attribute_partition, compare_partitions
from .degree import DegenerateInputError, PowerLawFit, degree_distribution, fit_power_law
from .paths import CentralityTable, PathMetrics, centrality, group_centrality, path_metrics

logger = logging.getLogger(__name__)


@dataclass
class AnalysisReport:
    relation: str
    degree_hist: dict[int, int]
    power_law: PowerLawFit | None
    power_law_status: str
    partitions: dict[float, Partition]
    comparisons: list[tuple[str, float, float]]
    aggregates: dict[str, nx.Graph]
    path_metrics: dict[str, PathMetrics | None]
    centrality: CentralityTable
    group_centrality: dict[str, CentralityTable] = field(default_factory=dict)

    def write(self, out_dir: str | Path) -> list[Path]:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        written = []

        def table(name: str, header: Sequence[str], rows) -> None:
            path = out / name
            with open(path, "w", newline="") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(header)
                for row in rows:
                    w.writerow([x if isinstance(x, str) else fmt(x) for x in row])
            written.append(path)

        table("degree_hist.csv", ["degree", "count"], self.degree_hist.items())
        pl = self.power_law
        table(
            "power_law.csv",
            ["gamma", "x_min", "ks", "n_tail", "low_confidence", "status"],
            [
                (pl.gamma, pl.x_min, pl.ks_statistic, pl.n_tail, pl.low_confidence, self.power_law_status)
                if pl
                else (math.nan, math.nan, math.nan, 0, True, self.power_law_status)
            ],
        )
        for res, part in sorted(self.partitions.items()):
            table(
                f"partition_{fmt(res)}.csv",
                ["vertex", "community"],
                ((v, c) for v, c in sorted(part.assignment.items())),
            )
        table(
            "communities.csv",
            ["resolution", "seed", "n_communities", "modularity"],
            ((r, p.seed, p.n_communities, p.modularity) for r, p in sorted(self.partitions.items())),
        )
        table("partition_compare.csv", ["pair", "nmi", "ari"], self.comparisons)
        for attr, agg in sorted(self.aggregates.items()):
            path = out / f"aggregate_{attr}.graphml"
            write_weighted_graphml(agg, path)
            written.append(path)
        table(
            "path_metrics.csv",
            ["scope", "diameter", "avg_path_length", "component_coverage", "component_size"],
            (
                (scope, pm.diameter, pm.avg_path_length, pm.component_coverage, pm.component_size)
                if pm
                else (scope, math.nan, math.nan, math.nan, 0)
                for scope, pm in self.path_metrics.items()
            ),
        )
        cols = ["closeness", "closeness_standard", "betweenness", "normalized_betweenness"]
        table(
            "centrality.csv",
            ["vertex", *cols],
            (
                (r.label, r.closeness, r.closeness_standard, r.betweenness, r.normalized_betweenness)
                for r in self.centrality.rows
            ),
        )
        group_rows = []
        for grouping, tbl in self.group_centrality.items():
            for r in tbl.top(len(tbl.rows)):
                group_rows.append(
                    (grouping, r.label, r.size, r.closeness, r.closeness_standard,
                     r.betweenness, r.normalized_betweenness)
                )
        table("centrality_groups.csv", ["grouping", "group", "size", *cols], group_rows)
        return written


def _detect_job(args):
    (items, view, seed) = args
    return [detect_communities(view, res, derive_seed(seed, "communities", res)) for res in items]


def run_analysis(
    graph: MultiRelationalGraph,
    relation: str = "ssn",
    resolutions: Sequence[float] = (1.0,),
    attributes: Sequence[str] = ("category",),
    seed: int = 0,
    jobs: int = 1,
    weighted_centrality: bool = False,
) -> AnalysisReport:
    view = single_relation_view(graph, relation)
    if view.number_of_edges() == 0:
        raise ValueError(f"relation {relation!r} has no edges; nothing to analyze")

    hist = degree_distribution(view)
    positive = [d for _, d in view.degree() if d > 0]
    try:
        pl, status = fit_power_law(positive), "ok"
    except DegenerateInputError as exc:
        logger.warning("power-law fit skipped: %s", exc)
        pl, status = None, "degenerate"

    resolutions = sorted(set(float(r) for r in resolutions))
    chunks = chunked_map(_detect_job, resolutions, jobs, extra=(view, seed), chunk_size=1)
    partitions = {p.resolution: p for chunk in chunks for p in chunk}

    attr_parts = {a: attribute_partition(graph, a) for a in attributes}
    comparisons = []
    for res, part in partitions.items():
        for a, ap in attr_parts.items():
            nmi, ari = compare_partitions(part, ap)
            comparisons.append((f"communities@{fmt(res)}~{a}", nmi, ari))
    for r1, r2 in zip(resolutions, resolutions[1:]):
        nmi, ari = compare_partitions(partitions[r1], partitions[r2])
        comparisons.append((f"communities@{fmt(r1)}~communities@{fmt(r2)}", nmi, ari))

    aggregates = {a: aggregate_by_attribute(view, ap) for a, ap in attr_parts.items()}

    pms: dict[str, PathMetrics | None] = {}
    for scope, g in [(relation, view), *((f"aggregate_{a}", agg) for a, agg in aggregates.items())]:
        try:
            pms[scope] = path_metrics(g, jobs=jobs)
        except ValueError as exc:
            logger.warning("path metrics for %s skipped: %s", scope, exc)
            pms[scope] = None

    table = centrality(view, weighted=weighted_centrality, jobs=jobs)
    groups = {a: group_centrality(table, ap) for a, ap in attr_parts.items()}
    for res, part in partitions.items():
        groups[f"communities@{fmt(res)}"] = group_centrality(table, part.assignment)

    return AnalysisReport(
        relation=relation,
        degree_hist=hist,
        power_law=pl,
        power_law_status=status,
        partitions=partitions,
        comparisons=comparisons,
        aggregates=aggregates,
        path_metrics=pms,
        centrality=table,
        group_centrality=groups,
    )
