"""Edge-set construction: time-decayed co-mention weights, coauthorship, bot filtering."""

from __future__ import annotations

import csv
import math
import unicodedata
from collections import defaultdict
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Iterable, Literal

import numpy as np

from ._parallel import chunked_map
from .model import EdgeSet, MentionEvent, PaperRecord

DAY = 86_400
WEEK = 7 * DAY

RtPairRule = Literal["mean", "min", "max"]


@dataclass(frozen=True)
class SsnConfig:
    time_window: float = WEEK
    min_interval: float = 1.0
    rt_pair_rule: RtPairRule = "mean"

    def __post_init__(self) -> None:
        if not self.time_window > 0:
            raise ValueError("time_window must be > 0")
        if self.min_interval < 1:
            raise ValueError("min_interval must be >= 1 second")
        if not self.min_interval < self.time_window:
            raise ValueError("min_interval must be < time_window")
        if self.rt_pair_rule not in ("mean", "min", "max"):
            raise ValueError(f"unknown rt_pair_rule {self.rt_pair_rule!r}")


@dataclass(frozen=True)
class BotFilterConfig:
    degree_z_threshold: float = 3.5
    density_z_threshold: float = 3.5
    density_bin: int = 3600
    # counts are integers, so a MAD below one count is a resolution artefact
    mad_floor: float = 1.0

    def __post_init__(self) -> None:
        if not (self.degree_z_threshold > 0 and self.density_z_threshold > 0):
            raise ValueError("bot-filter thresholds must be > 0")
        if self.density_bin <= 0:
            raise ValueError("density_bin must be > 0")


@dataclass(frozen=True)
class BotRemoval:
    user_id: str
    metric: str
    score: float
    threshold: float


def normalize_retweets(events: Iterable[MentionEvent]) -> dict[str, float]:
    """Per-paper max retweet count scaled by the corpus maximum.

    With no retweets anywhere every paper gets 1.0, so weights reduce to
    pure time decay.
    """
    raw: dict[str, int] = {}
    for e in events:
        raw[e.paper_id] = max(raw.get(e.paper_id, 0), e.retweet_count)
    if not raw:
        raise ValueError("normalize_retweets needs at least one event")
    top = max(raw.values())
    if top == 0:
        return {p: 1.0 for p in sorted(raw)}
    return {p: raw[p] / top for p in sorted(raw)}


def pair_weight(t_i: float, t_j: float, rt_norm_pair: float, cfg: SsnConfig) -> float:
    """rt / sqrt(T) for T = max(|t_j - t_i|, min_interval) < time_window, else 0."""
    interval = max(abs(t_j - t_i), cfg.min_interval)
    if interval >= cfg.time_window:
        return 0.0
    return rt_norm_pair / math.sqrt(interval)


def combine_rt(a: float, b: float, rule: RtPairRule) -> float:
    if rule == "mean":
        return (a + b) / 2
    if rule == "min":
        return min(a, b)
    return max(a, b)


def first_mentions(events: Iterable[MentionEvent]) -> dict[str, dict[str, int]]:
    """user -> paper -> earliest mention timestamp."""
    out: dict[str, dict[str, int]] = defaultdict(dict)
    for e in events:
        seen = out[e.user_id]
        t = seen.get(e.paper_id)
        if t is None or e.timestamp < t:
            seen[e.paper_id] = e.timestamp
    return out


def _user_contributions(
    papers: dict[str, int], rt_norm: dict[str, float], cfg: SsnConfig
) -> list[tuple[str, str, float]]:
    out = []
    for a, b in combinations(sorted(papers), 2):
        rt = combine_rt(rt_norm[a], rt_norm[b], cfg.rt_pair_rule)
        w = pair_weight(papers[a], papers[b], rt, cfg)
        if w > 0:
            out.append((a, b, w))
    return out


def _contrib_chunk(args):
    chunk, rt_norm, cfg = args
    return [_user_contributions(p, rt_norm, cfg) for p in chunk]


def build_ssn(events: list[MentionEvent], cfg: SsnConfig | None = None, jobs: int = 1) -> EdgeSet:
    """Co-mention edge set: summed time-decayed weights over every user.

    Users are processed in sorted order and their contributions accumulated
    in that order, so the result does not depend on ``jobs``.
    """
    cfg = cfg or SsnConfig()
    edges = EdgeSet("ssn")
    if not events:
        return edges
    rt_norm = normalize_retweets(events)
    per_user = first_mentions(events)
    users = sorted(per_user)
    if jobs > 1 and len(users) > 1:
        chunks = chunked_map(_contrib_chunk, [per_user[u] for u in users], jobs, extra=(rt_norm, cfg))
        contribs = [c for chunk in chunks for c in chunk]
    else:
        contribs = [_user_contributions(per_user[u], rt_norm, cfg) for u in users]
    for triples in contribs:
        for a, b, w in triples:
            edges.add(a, b, w)
    return edges


def normalize_author(name: str) -> str:
    return " ".join(unicodedata.normalize("NFKC", name).casefold().split())


def build_coauthorship(papers: dict[str, PaperRecord]) -> EdgeSet:
    """Weight-1 edge between every pair of papers sharing an author name."""
    by_author: dict[str, set[str]] = defaultdict(set)
    for pid, rec in papers.items():
        if not rec.enriched:
            continue
        for name in rec.authors:
            key = normalize_author(name)
            if key:
                by_author[key].add(pid)
    pairs: set[tuple[str, str]] = set()
    for pids in by_author.values():
        pairs.update(combinations(sorted(pids), 2))
    edges = EdgeSet("coauthorship")
    for a, b in sorted(pairs):
        edges.add(a, b, 1.0)
    return edges


def modified_z_scores(values: np.ndarray, mad_floor: float = 0.0) -> np.ndarray:
    """0.6745 * (x - median) / MAD, with MAD clamped below at ``mad_floor``."""
    med = np.median(values)
    mad = max(float(np.median(np.abs(values - med))), mad_floor)
    if mad == 0:
        return np.where(values > med, np.inf, 0.0)
    return 0.6745 * (values - med) / mad


def user_statistics(events: Iterable[MentionEvent], density_bin: int) -> tuple[list[str], np.ndarray, np.ndarray]:
    """Per user: distinct-paper degree and peak events per aligned time bin."""
    papers: dict[str, set[str]] = defaultdict(set)
    bins: dict[str, dict[int, int]] = defaultdict(lambda: defaultdict(int))
    for e in events:
        papers[e.user_id].add(e.paper_id)
        bins[e.user_id][e.timestamp // density_bin] += 1
    users = sorted(papers)
    degree = np.array([len(papers[u]) for u in users], dtype=float)
    peak = np.array([max(bins[u].values()) for u in users], dtype=float)
    return users, degree, peak


def filter_bots(
    events: list[MentionEvent], cfg: BotFilterConfig | None = None
) -> tuple[list[MentionEvent], list[BotRemoval]]:
    """Drop users whose degree or posting density is a robust high outlier.

    Only the high side counts: a user is removed when the modified z-score of
    either metric exceeds its threshold. Fewer than three users means no
    removal.
    """
    cfg = cfg or BotFilterConfig()
    users, degree, peak = user_statistics(events, cfg.density_bin)
    if len(users) < 3:
        return list(events), []
    z_deg = modified_z_scores(degree, cfg.mad_floor)
    z_den = modified_z_scores(peak, cfg.mad_floor)
    removed: list[BotRemoval] = []
    for i, u in enumerate(users):
        if z_deg[i] > cfg.degree_z_threshold:
            removed.append(BotRemoval(u, "degree", float(z_deg[i]), cfg.degree_z_threshold))
        if z_den[i] > cfg.density_z_threshold:
            removed.append(BotRemoval(u, "density", float(z_den[i]), cfg.density_z_threshold))
    gone = {r.user_id for r in removed}
    return [e for e in events if e.user_id not in gone], removed


def write_bot_audit(removed: Iterable[BotRemoval], path: str | Path) -> None:
    from .graphio import fmt

    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["user_id", "metric", "score", "threshold"])
        for r in removed:
            w.writerow([r.user_id, r.metric, fmt(r.score), fmt(r.threshold)])
