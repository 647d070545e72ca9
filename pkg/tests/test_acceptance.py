"""Acceptance gate: ten end-to-end criteria, each reported as one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py`` (the lines are repeated in the
terminal summary) or ``python3 tests/test_acceptance.py``.
"""

import json
import math
import random
import time
from pathlib import Path

import networkx as nx
import pytest
import yaml

from conftest import ACCEPTANCE_LINES, random_graph, two_cliques
from oracles import (
    modularity_double_sum,
    naive_betweenness,
    naive_closeness,
    naive_path_metrics,
    ssn_brute_force,
)
from ssnet.analyze import (
    centrality,
    compare_partitions,
    degree_distribution,
    detect_communities,
    fit_power_law,
    modularity,
    path_metrics,
    run_analysis,
)
from ssnet.build import DAY, SsnConfig, build_ssn, filter_bots
from ssnet.config import PipelineConfig
from ssnet.ingest import mentions_to_stream_lines
from ssnet.model import MentionEvent, single_relation_view
from ssnet.pipeline import MANIFEST_FILE, build_stage, run_pipeline
from ssnet.synth import (
    PreferentialConfig,
    SynthConfig,
    generate_metadata,
    generate_preferential_stream,
    generate_stream,
    sample_power_law,
)

HEAVY_TAIL_CONFIG = Path(__file__).resolve().parents[1] / "scripts" / "configs" / "heavy_tail.yaml"
T0 = 1394582400


def verdict(n: int, title: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} [{n:2d}] {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_01_weight_formula_matches_brute_force():
    start = time.perf_counter()
    worst, mismatched, sizes = 0.0, 0, []
    rt_modes = ("uniform", "power_law", "zero")
    for seed in range(20):
        cfg = SynthConfig(
            n_papers=60,
            n_users=50,
            mentions_per_user=8,
            rt_distribution=rt_modes[seed % 3],
            seed=seed,
        )
        events, _ = generate_stream(cfg)
        events = events[:500]
        sizes.append(len(events))
        # a window shorter than the generator's so the cutoff is exercised
        ssn_cfg = SsnConfig(time_window=[2 * DAY, 7 * DAY][seed % 2])
        got = build_ssn(events, ssn_cfg)
        want = ssn_brute_force(events, ssn_cfg.time_window)
        if {(a, b) for a, b, _ in got.sorted_edges()} != set(want):
            mismatched += 1
            continue
        worst = max([worst] + [abs(got.weight(a, b) - w) for (a, b), w in want.items()])
    elapsed = time.perf_counter() - start
    ok = mismatched == 0 and worst <= 1e-12 and max(sizes) <= 500 and elapsed < 5
    verdict(1, "weight formula vs brute force", ok,
            f"20 streams (<= {max(sizes)} events), edge-set mismatches {mismatched}, "
            f"max |dw| {worst:.1e}, {elapsed:.2f}s")


def test_02_window_cutoff_is_strict():
    failures = []
    for window in (60, 3600, 7 * DAY, 12345):
        cfg = SsnConfig(time_window=window)
        for dt in (window - 1, window, window + 1, 2 * window):
            events = [MentionEvent("u", "A", T0, 5), MentionEvent("u", "B", T0 + dt, 5)]
            w = build_ssn(events, cfg).weight("A", "B")
            expected = 1 / math.sqrt(dt) if dt < window else 0.0
            if abs(w - expected) > 1e-15:
                failures.append((window, dt, w))
    # many users straddling the boundary: only the inside pairs may contribute
    events, inside = [], 0
    for i in range(200):
        dt = 7 * DAY + (i % 5) - 2
        inside += dt < 7 * DAY
        events += [MentionEvent(f"u{i:03d}", "A", T0 + i, 1), MentionEvent(f"u{i:03d}", "B", T0 + i + dt, 1)]
    got = build_ssn(events).weight("A", "B")
    want = sum(1 / math.sqrt(7 * DAY + d) for d in (-2, -1)) * 40
    if abs(got - want) > 1e-12:
        failures.append(("straddle", got, want))
    verdict(2, "window cutoff", not failures,
            f"|dt| = window contributes 0; straddling stream weight {got:.6g} from {inside} inside pairs"
            + (f"; failures {failures}" if failures else ""))


def test_03_planted_communities_recovered():
    start = time.perf_counter()
    scores = []
    for seed in range(10):
        events, truth = generate_stream(SynthConfig(n_papers=100, n_blocks=4, p_in=0.3, p_out=0.01, seed=seed))
        graph = build_stage(events, None, SsnConfig())
        part = detect_communities(single_relation_view(graph, "ssn"), 1.0, seed=seed)
        nmi, _ = compare_partitions(part, {p: truth.blocks[p] for p in part.assignment})
        scores.append(nmi)
    elapsed = time.perf_counter() - start
    good = sum(s >= 0.9 for s in scores)
    verdict(3, "planted community recovery", good >= 9 and elapsed < 10,
            f"{good}/10 seeds with NMI >= 0.9 (min {min(scores):.3f}), {elapsed:.2f}s")


def test_04_modularity_self_consistency():
    worst, checked = 0.0, 0
    graphs = [two_cliques(), nx.planted_partition_graph(4, 25, 0.3, 0.01, seed=1)]
    graphs += [random_graph(40, 0.1, s) for s in range(10)]
    for i, g in enumerate(graphs):
        rng = random.Random(i)
        for u, v in g.edges:
            g[u][v]["weight"] = rng.uniform(0.5, 3.0)
        for res in (0.25, 0.5, 1.0, 2.0, 4.0):
            part = detect_communities(g, res, seed=i)
            worst = max(worst, abs(part.modularity - modularity_double_sum(g, part.assignment, res)))
            checked += 1
    # partitions returned by the full analysis as well
    events, _ = generate_stream(SynthConfig(seed=3))
    graph = build_stage(events, None, SsnConfig())
    view = single_relation_view(graph, "ssn")
    report = run_analysis(graph, resolutions=(0.5, 1.0, 2.0), attributes=())
    for res, part in report.partitions.items():
        worst = max(worst, abs(part.modularity - modularity_double_sum(view, part.assignment, res)))
        checked += 1

    k5 = nx.complete_graph(5)
    one = modularity(k5, {v: 0 for v in k5})
    single = modularity(nx.Graph([(0, 1)]), {0: 0, 1: 1})
    hand_ok = abs(one) < 1e-15 and single == -0.5
    verdict(4, "modularity self-consistency", worst <= 1e-12 and hand_ok,
            f"{checked} partitions, max |Q - direct| {worst:.1e}; one community Q={one:g}, "
            f"single edge split Q={single:g}")


def test_05_power_law_exponent_recovered():
    start = time.perf_counter()
    fits = {}
    for gamma in (2.0, 2.5, 3.0):
        fits[gamma] = fit_power_law(sample_power_law(gamma, 1, 10_000, seed=int(gamma * 10))).gamma
    elapsed = time.perf_counter() - start
    ok = all(abs(fits[g] - g) <= 0.15 for g in fits) and elapsed < 5
    verdict(5, "power-law recovery", ok,
            ", ".join(f"true {g} -> {f:.3f}" for g, f in fits.items()) + f", {elapsed:.2f}s")


def test_06_centrality_matches_path_counting():
    worst_b = worst_c = 0.0
    for seed in range(20):
        g = random_graph(10 + 2 * seed, [0.08, 0.15, 0.3][seed % 3], seed)
        table = centrality(g).by_label()
        bc, cl = naive_betweenness(g), naive_closeness(g)
        for v in g:
            row = table[str(v)]
            worst_b = max(worst_b, abs(row.betweenness - bc[v]))
            if math.isnan(cl[v]) != math.isnan(row.closeness):
                worst_c = math.inf
            elif not math.isnan(cl[v]):
                worst_c = max(worst_c, abs(row.closeness - cl[v]))
    verdict(6, "centrality oracle", worst_b <= 1e-9 and worst_c <= 1e-9,
            f"20 graphs (n <= 48), max |db| {worst_b:.1e}, max |dcloseness| {worst_c:.1e}")


def test_07_path_metrics_exact():
    p5 = path_metrics(nx.path_graph(5))
    k4 = path_metrics(nx.complete_graph(4))
    hand_ok = (p5.diameter, p5.avg_path_length) == (4, 2.0) and (k4.diameter, k4.avg_path_length) == (1, 1.0)
    bad = 0
    for seed in range(10):
        g = random_graph(50, [0.05, 0.1][seed % 2], seed)
        pm = path_metrics(g)
        diam, avg = naive_path_metrics(g)
        bad += pm.diameter != diam or abs(pm.avg_path_length - avg) > 1e-12
    verdict(7, "path metrics", hand_ok and bad == 0,
            f"P5 ({p5.diameter}, {p5.avg_path_length}), K4 ({k4.diameter}, {k4.avg_path_length}), "
            f"{10 - bad}/10 random graphs match the oracle")


def test_08_bots_removed_without_collateral():
    missed = collateral = 0
    for seed in range(10):
        cfg = SynthConfig(n_users=20 + 10 * seed, bot_count=1 + seed % 3, bot_rate_multiplier=50, seed=seed)
        events, truth = generate_stream(cfg)
        _, removed = filter_bots(events)
        gone = {r.user_id for r in removed}
        missed += len(set(truth.bots) - gone)
        collateral += len(gone - set(truth.bots))
    verdict(8, "bot filter", missed == 0 and collateral == 0,
            f"10 seeds, bots missed {missed}, regular users removed {collateral}")


def test_09_heavy_tailed_degree_distribution():
    cfg = PreferentialConfig(**yaml.safe_load(HEAVY_TAIL_CONFIG.read_text()))
    events = generate_preferential_stream(cfg)
    kept, _ = filter_bots(events)
    graph = build_stage(kept, None, SsnConfig(time_window=cfg.time_window))
    hist = degree_distribution(single_relation_view(graph, "ssn"))
    degrees = [d for d, c in hist.items() if d > 0 for _ in range(c)]
    fit = fit_power_law(degrees)
    ok = fit.x_min <= 5 and 1.5 <= fit.gamma <= 3.5
    verdict(9, "heavy-tailed degree distribution", ok,
            f"{len(graph.vertices)} papers, gamma {fit.gamma:.3f}, x_min {fit.x_min}, "
            f"KS {fit.ks_statistic:.3f}, tail {fit.n_tail}, max degree {max(hist)}")


def test_10_pipeline_is_deterministic(tmp_path):
    events, truth = generate_stream(SynthConfig(bot_count=2, seed=11))
    mentions = tmp_path / "mentions.jsonl"
    mentions.write_text("".join(line + "\n" for line in mentions_to_stream_lines(events)))
    meta = tmp_path / "metadata.jsonl"
    meta.write_text("".join(json.dumps(r, sort_keys=True) + "\n" for r in generate_metadata(truth, seed=11)))

    def run(name, jobs):
        out = tmp_path / name
        run_pipeline(PipelineConfig(mentions=mentions, metadata=meta, out=out, seed=5, jobs=jobs))
        return {p.name: p.read_bytes() for p in sorted(out.iterdir())}

    a, b = run("a", 1), run("b", 2)
    same_digests = json.loads(a[MANIFEST_FILE])["outputs"] == json.loads(b[MANIFEST_FILE])["outputs"]
    verdict(10, "end-to-end determinism", a == b and same_digests,
            f"{len(a)} files byte-identical across two runs: {a == b}; manifest digests equal: {same_digests}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
