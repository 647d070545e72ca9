"""Seeded synthetic mention streams and power-law samplers.

Nothing here touches the analysis code; generators are the ground truth the
pipeline is checked against.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

import numpy as np

from .build import WEEK
from .model import MentionEvent

BASE_EPOCH = 1_394_582_400  # 2014-03-12T00:00:00Z


@dataclass(frozen=True)
class SynthConfig:
    n_papers: int = 100
    n_users: int = 200
    n_blocks: int = 4
    p_in: float = 0.3
    p_out: float = 0.01
    mentions_per_user: int = 8
    bot_count: int = 0
    bot_rate_multiplier: float = 50.0
    rt_distribution: Literal["zero", "uniform", "power_law"] = "uniform"
    rt_max: int = 100
    rt_gamma: float = 2.5
    time_window: int = WEEK
    start_spread: int = 4 * WEEK
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0 <= self.p_out < self.p_in <= 1:
            raise ValueError("need 0 <= p_out < p_in <= 1")
        if self.n_papers < 1 or self.n_users < 0 or self.n_blocks < 1:
            raise ValueError("n_papers and n_blocks must be >= 1, n_users >= 0")
        if self.n_blocks > self.n_papers:
            raise ValueError("more blocks than papers")
        if self.mentions_per_user < 1:
            raise ValueError("mentions_per_user must be >= 1")
        if self.bot_count < 0 or self.bot_rate_multiplier <= 0:
            raise ValueError("bot_count must be >= 0 and bot_rate_multiplier > 0")
        if self.rt_distribution not in ("zero", "uniform", "power_law"):
            raise ValueError(f"unknown rt_distribution {self.rt_distribution!r}")
        if self.time_window < 2:
            raise ValueError("time_window must be >= 2 seconds")


@dataclass
class GroundTruth:
    blocks: dict[str, int]
    bots: list[str]
    home_blocks: dict[str, int] = field(default_factory=dict)


def paper_id(i: int) -> str:
    return f"1403.{i:05d}"


def _retweets(rng: np.random.Generator, cfg: SynthConfig, size: int) -> np.ndarray:
    if cfg.rt_distribution == "zero":
        return np.zeros(size, dtype=int)
    if cfg.rt_distribution == "uniform":
        return rng.integers(0, cfg.rt_max + 1, size=size)
    return np.asarray(_power_law_draw(rng, cfg.rt_gamma, 1, size, cfg.rt_max + 1)) - 1


def _dedupe(events: list[MentionEvent]) -> list[MentionEvent]:
    seen = set()
    out = []
    for e in sorted(events, key=lambda e: (e.timestamp, e.user_id, e.paper_id)):
        key = (e.user_id, e.paper_id, e.timestamp)
        if key not in seen:
            seen.add(key)
            out.append(e)
    return out


def generate_stream(cfg: SynthConfig) -> tuple[list[MentionEvent], GroundTruth]:
    """Planted-block mention stream with optional bot users.

    Papers go round-robin to blocks. A regular user picks a home block and
    mentions ``mentions_per_user`` distinct papers, drawn with weight
    ``p_in`` for home-block papers and ``p_out`` for the rest, all inside one
    time window. A bot mentions uniformly random papers
    ``bot_rate_multiplier`` times as often within its own window.
    """
    rng = np.random.default_rng(cfg.seed)
    papers = [paper_id(i) for i in range(cfg.n_papers)]
    blocks = {p: i % cfg.n_blocks for i, p in enumerate(papers)}
    paper_block = np.array([blocks[p] for p in papers])

    n_total = cfg.n_users + cfg.bot_count
    user_ids = [f"user{i:05d}" for i in range(n_total)]
    is_bot = np.zeros(n_total, dtype=bool)
    if cfg.bot_count:
        is_bot[rng.choice(n_total, size=cfg.bot_count, replace=False)] = True

    events: list[MentionEvent] = []
    home_blocks: dict[str, int] = {}
    for u, uid in enumerate(user_ids):
        start = BASE_EPOCH + int(rng.integers(0, cfg.start_spread + 1))
        if is_bot[u]:
            k = max(1, int(round(cfg.mentions_per_user * cfg.bot_rate_multiplier)))
            chosen = rng.integers(0, cfg.n_papers, size=k)
        else:
            home = int(rng.integers(0, cfg.n_blocks))
            home_blocks[uid] = home
            w = np.where(paper_block == home, cfg.p_in, cfg.p_out)
            k = min(cfg.mentions_per_user, int(np.count_nonzero(w)))
            chosen = rng.choice(cfg.n_papers, size=k, replace=False, p=w / w.sum())
        offsets = rng.integers(0, cfg.time_window, size=len(chosen))
        rts = _retweets(rng, cfg, len(chosen))
        for p, off, rt in zip(chosen, offsets, rts):
            events.append(MentionEvent(uid, papers[int(p)], start + int(off), int(rt)))

    bots = [uid for u, uid in enumerate(user_ids) if is_bot[u]]
    return _dedupe(events), GroundTruth(blocks=blocks, bots=bots, home_blocks=home_blocks)


@dataclass(frozen=True)
class PreferentialConfig:
    """Mention stream where papers attract mentions in proportion to past ones.

    Each mention introduces a new paper with probability ``new_paper_prob``,
    otherwise it re-mentions a paper chosen proportionally to its mention
    count so far. Users make ``base_mentions + Poisson(extra_mentions_mean)``
    mentions. The defaults are the heavy-tailed configuration used for the
    degree-distribution experiment.
    """

    n_users: int = 3000
    base_mentions: int = 2
    extra_mentions_mean: float = 0.0
    new_paper_prob: float = 0.4
    time_window: int = WEEK
    start_spread: int = 4 * WEEK
    rt_max: int = 100
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0 < self.new_paper_prob <= 1:
            raise ValueError("new_paper_prob must be in (0, 1]")
        if self.n_users < 1 or self.base_mentions < 1 or self.extra_mentions_mean < 0:
            raise ValueError("need n_users >= 1, base_mentions >= 1, extra_mentions_mean >= 0")


def generate_preferential_stream(cfg: PreferentialConfig) -> list[MentionEvent]:
    rng = np.random.default_rng(cfg.seed)
    history: list[int] = []
    n_papers = 0
    events = []
    for u in range(cfg.n_users):
        uid = f"user{u:05d}"
        start = BASE_EPOCH + int(rng.integers(0, cfg.start_spread + 1))
        k = cfg.base_mentions + int(rng.poisson(cfg.extra_mentions_mean))
        for _ in range(k):
            if not history or rng.random() < cfg.new_paper_prob:
                p = n_papers
                n_papers += 1
            else:
                p = history[int(rng.integers(0, len(history)))]
            history.append(p)
            off = int(rng.integers(0, cfg.time_window))
            rt = int(rng.integers(0, cfg.rt_max + 1))
            events.append(MentionEvent(uid, paper_id(p), start + off, rt))
    return _dedupe(events)


def _power_law_draw(rng: np.random.Generator, gamma: float, x_min: int, n: int, x_max: int) -> list[int]:
    k = np.arange(x_min, x_max + 1, dtype=float)
    pmf = k ** -gamma
    cdf = np.cumsum(pmf)
    cdf /= cdf[-1]
    idx = np.searchsorted(cdf, rng.random(n), side="left")
    return (np.minimum(idx, k.size - 1) + x_min).astype(int).tolist()


def sample_power_law(gamma: float, x_min: int = 1, n: int = 1, seed: int = 0, x_max: int = 10**6) -> list[int]:
    """Inverse-CDF draws from P(k) ~ k^-gamma on [x_min, x_max]."""
    if gamma <= 1:
        raise ValueError("gamma must be > 1")
    if x_min < 1 or x_max < x_min:
        raise ValueError("need 1 <= x_min <= x_max")
    if n < 1:
        raise ValueError("n must be >= 1")
    return _power_law_draw(np.random.default_rng(seed), gamma, x_min, n, x_max)


DEFAULT_CATEGORIES = ("cs.IR", "cs.DB", "physics.soc-ph", "quant-ph", "stat.ML", "astro-ph.GA")


def generate_metadata(
    truth: GroundTruth,
    categories: tuple[str, ...] = DEFAULT_CATEGORIES,
    authors_per_block: int = 10,
    authors_per_paper: int = 2,
    seed: int = 0,
) -> list[dict]:
    """Metadata fixture rows for the papers of a planted stream.

    Block ``b`` papers get category ``categories[b % len(categories)]`` and
    authors drawn from a per-block pool, so coauthorship mirrors the blocks.
    """
    rng = np.random.default_rng(seed)
    rows = []
    for p in sorted(truth.blocks):
        b = truth.blocks[p]
        picks = rng.choice(authors_per_block, size=min(authors_per_paper, authors_per_block), replace=False)
        rows.append(
            {
                "paper_id": p,
                "title": f"Synthetic paper {p}",
                "authors": [f"Author {b}-{int(i)}" for i in sorted(picks)],
                "primary_category": categories[b % len(categories)],
                "published": "2014-03-01",
                "summary": "",
            }
        )
    return rows


def write_ground_truth(truth: GroundTruth, path: str | Path) -> None:
    bots = set(truth.bots)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["entity", "id", "block", "is_bot"])
        for p in sorted(truth.blocks):
            w.writerow(["paper", p, truth.blocks[p], 0])
        for u in sorted(set(truth.home_blocks) | bots):
            w.writerow(["user", u, truth.home_blocks.get(u, -1), int(u in bots)])


def read_ground_truth(path: str | Path) -> GroundTruth:
    truth = GroundTruth(blocks={}, bots=[])
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            if row["entity"] == "paper":
                truth.blocks[row["id"]] = int(row["block"])
            elif row["is_bot"] == "1":
                truth.bots.append(row["id"])
            else:
                truth.home_blocks[row["id"]] = int(row["block"])
    return truth
