import csv
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import ssn_brute_force
from ssnet.build import (
    DAY,
    WEEK,
    BotFilterConfig,
    SsnConfig,
    build_coauthorship,
    build_ssn,
    filter_bots,
    modified_z_scores,
    normalize_retweets,
    pair_weight,
    write_bot_audit,
)
from ssnet.model import MentionEvent, PaperRecord
from ssnet.synth import SynthConfig, generate_stream

T0 = 1394582400


def ev(user, paper, t, rt=0):
    return MentionEvent(user, paper, T0 + t, rt)


def test_normalize_retweets_examples():
    assert normalize_retweets([ev("u", "A", 0, 50), ev("u", "B", 0, 100)]) == {"A": 0.5, "B": 1.0}
    assert normalize_retweets([ev("u", "A", 0), ev("v", "B", 0)]) == {"A": 1.0, "B": 1.0}
    assert normalize_retweets([ev("u", "A", 0, 7)]) == {"A": 1.0}
    with pytest.raises(ValueError):
        normalize_retweets([])


def test_normalize_retweets_uses_per_paper_max():
    rt = normalize_retweets([ev("u", "A", 0, 10), ev("v", "A", 5, 40), ev("u", "B", 0, 80)])
    assert rt == {"A": 0.5, "B": 1.0}


def test_pair_weight_examples():
    cfg = SsnConfig()
    assert pair_weight(0, 4, 1.0, cfg) == 0.5
    assert pair_weight(0, 8 * DAY, 1.0, cfg) == 0.0
    assert pair_weight(10, 10, 1.0, cfg) == 1.0


def test_pair_weight_boundary_is_strict():
    cfg = SsnConfig(time_window=100)
    assert pair_weight(0, 100, 1.0, cfg) == 0.0
    assert pair_weight(0, 99, 1.0, cfg) == pytest.approx(1 / math.sqrt(99))


def test_config_validation():
    with pytest.raises(ValueError):
        SsnConfig(time_window=0)
    with pytest.raises(ValueError):
        SsnConfig(min_interval=0.5)
    with pytest.raises(ValueError):
        SsnConfig(rt_pair_rule="median")
    with pytest.raises(ValueError):
        BotFilterConfig(density_bin=0)


def test_build_ssn_examples():
    one = build_ssn([ev("u", "A", 0), ev("u", "B", 100)])
    assert one.sorted_edges() == [("A", "B", pytest.approx(0.1))]

    two = build_ssn([ev("u", "A", 0), ev("u", "B", 100), ev("v", "A", 0), ev("v", "B", 100)])
    assert two.weight("A", "B") == pytest.approx(0.2)

    far = build_ssn([ev("u", "A", 0), ev("u", "B", 8 * DAY)])
    assert len(far) == 0

    assert len(build_ssn([])) == 0


def test_build_ssn_uses_earliest_mention():
    events = [ev("u", "A", 0), ev("u", "B", 100), ev("u", "B", 10_000)]
    assert build_ssn(events).weight("A", "B") == pytest.approx(0.1)


@pytest.mark.parametrize("rule, expected", [("mean", 0.75), ("min", 0.5), ("max", 1.0)])
def test_rt_pair_rule(rule, expected):
    events = [ev("u", "A", 0, 50), ev("u", "B", 1, 100)]
    assert build_ssn(events, SsnConfig(rt_pair_rule=rule)).weight("A", "B") == pytest.approx(expected)


def test_build_ssn_matches_oracle_on_planted_stream():
    events, _ = generate_stream(SynthConfig(n_papers=40, n_users=30, mentions_per_user=6, seed=3,
                                            rt_distribution="power_law"))
    got = build_ssn(events)
    want = ssn_brute_force(events, WEEK)
    assert set(want) == {(a, b) for a, b, _ in got.sorted_edges()}
    for (a, b), w in want.items():
        assert got.weight(a, b) == pytest.approx(w, abs=1e-12)


def test_build_ssn_independent_of_jobs():
    events, _ = generate_stream(SynthConfig(n_papers=60, n_users=150, seed=1))
    assert build_ssn(events, jobs=1) == build_ssn(events, jobs=3)


events_strategy = st.lists(
    st.builds(
        MentionEvent,
        st.sampled_from(["u1", "u2", "u3"]),
        st.sampled_from(["A", "B", "C", "D"]),
        st.integers(T0, T0 + 3 * WEEK // 2),
        st.integers(0, 20),
    ),
    max_size=25,
)


@settings(max_examples=60, deadline=None)
@given(events_strategy)
def test_oracle_property(events):
    got = build_ssn(events)
    want = ssn_brute_force(events, WEEK)
    assert {(a, b) for a, b, _ in got.sorted_edges()} == set(want)
    for (a, b), w in want.items():
        assert abs(got.weight(a, b) - w) <= 1e-12


@settings(max_examples=40, deadline=None)
@given(events_strategy, st.integers(2, WEEK))
def test_wider_window_never_loses_weight(events, window):
    narrow = build_ssn(events, SsnConfig(time_window=window))
    wide = build_ssn(events, SsnConfig(time_window=2 * window))
    for a, b, w in narrow:
        assert wide.weight(a, b) >= w - 1e-12


def test_coauthorship_examples():
    def paper(pid, *authors):
        return PaperRecord(pid, authors=list(authors), enriched=True)

    pair = build_coauthorship({"a": paper("a", "Jane Doe"), "b": paper("b", "jane  DOE", "X")})
    assert pair.sorted_edges() == [("a", "b", 1.0)]

    assert len(build_coauthorship({"a": paper("a", "Jane"), "b": paper("b", "Bob")})) == 0

    tri = build_coauthorship({p: paper(p, "Ann") for p in "abc"})
    assert [(a, b) for a, b, _ in tri.sorted_edges()] == [("a", "b"), ("a", "c"), ("b", "c")]
    assert tri.total_weight() == 3

    # many shared authors still give a weight-1 edge
    multi = build_coauthorship({"a": paper("a", "X", "Y"), "b": paper("b", "X", "Y")})
    assert multi.weight("a", "b") == 1.0


def test_coauthorship_ignores_stubs():
    assert len(build_coauthorship({"a": PaperRecord.stub("a"), "b": PaperRecord.stub("b")})) == 0


# -- bot filter ---------------------------------------------------------------


def test_degree_outlier_removed():
    events = [ev(f"u{i:02d}", f"p{i:03d}", i * DAY) for i in range(20)]
    events += [ev("bot", f"q{j:03d}", j * 600) for j in range(500)]
    kept, removed = filter_bots(events)
    assert {r.user_id for r in removed} == {"bot"}
    assert "degree" in {r.metric for r in removed}
    assert len(kept) == 20


def test_density_outlier_removed():
    events = [ev(f"u{i:02d}", f"p{d:03d}", d * DAY) for i in range(20) for d in range(30)]
    # same paper over and over: only the density rule can fire
    events += [ev("burst", "p000", s * 3) for s in range(1000)]
    _, removed = filter_bots(events)
    assert {r.user_id for r in removed} == {"burst"}
    assert {r.metric for r in removed} == {"density"}


def test_uniform_users_untouched():
    events = [ev(f"u{i:02d}", f"p{d:03d}", d * DAY) for i in range(20) for d in range(5)]
    kept, removed = filter_bots(events)
    assert removed == [] and kept == events


def test_too_few_users_never_filtered():
    events = [ev("a", "p", 0)] + [ev("b", f"q{j}", j) for j in range(500)]
    kept, removed = filter_bots(events)
    assert removed == [] and len(kept) == len(events)


def test_modified_z_scores_floor():
    z = modified_z_scores([1.0, 1.0, 1.0, 2.0], mad_floor=1.0)
    assert z[-1] == pytest.approx(0.6745)
    assert list(modified_z_scores([1.0, 1.0, 3.0]))[:2] == [0.0, 0.0]


@pytest.mark.parametrize("seed", range(5))
def test_planted_bots_removed_and_no_false_positives(seed):
    cfg = SynthConfig(n_users=60, bot_count=2, bot_rate_multiplier=50, seed=seed)
    events, truth = generate_stream(cfg)
    _, removed = filter_bots(events)
    assert {r.user_id for r in removed} == set(truth.bots)


def test_bot_audit_csv(tmp_path):
    events = [ev(f"u{i:02d}", f"p{i:03d}", i * DAY) for i in range(20)]
    events += [ev("bot", f"q{j:03d}", j * 600) for j in range(500)]
    _, removed = filter_bots(events)
    write_bot_audit(removed, tmp_path / "audit.csv")
    rows = list(csv.DictReader(open(tmp_path / "audit.csv")))
    assert rows and all(r["user_id"] == "bot" for r in rows)
    assert all(float(r["score"]) > float(r["threshold"]) for r in rows)
