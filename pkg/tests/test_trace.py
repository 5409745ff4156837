import random

import pytest

from packcache.engine import PackCacheEngine
from packcache.model import CostParams, Request, Trace
from packcache.trace import (AdversaryConfig, SyntheticConfig, TraceFormatError,
                             generate_adversarial, generate_synthetic,
                             pair_heavy_config, pair_history, parse_trace,
                             write_trace)

from conftest import random_trace


def test_parse_single_pair_request():
    trace = parse_trace("k=2 m=3\n1.0 2 1 2\n")
    assert trace.k == 2 and trace.m == 3
    assert trace.requests == (Request(1.0, 1, (0, 1)),)


def test_parse_skips_comments_and_blank_lines():
    trace = parse_trace("# made by hand\nk=3 m=2\n\n# first\n0.5 1 3\n")
    assert trace.requests == (Request(0.5, 0, (2,)),)


def test_parse_duplicate_timestamp():
    with pytest.raises(TraceFormatError, match="line 3: duplicate timestamp"):
        parse_trace("k=2 m=3\n1.0 1 1\n1.0 2 2\n")


@pytest.mark.parametrize("line", ["1.0 2 1 1", "1.0 2 0 0"])
def test_parse_items_not_distinct(line):
    with pytest.raises(TraceFormatError, match="items not distinct"):
        parse_trace(f"k=2 m=3\n{line}\n")


@pytest.mark.parametrize("body, fragment", [
    ("1.0 4 1", "server id 4 out of range"),
    ("1.0 1 3", "item id 3 out of range"),
    ("1.0 1", "expected"),
    ("1.0 1 1 2 1", "expected"),
    ("abc 1 1", "malformed"),
    ("-2 1 1", "bad timestamp"),
])
def test_parse_reports_line_numbers(body, fragment):
    with pytest.raises(TraceFormatError, match=f"line 2: .*{fragment}"):
        parse_trace(f"k=2 m=3\n{body}\n")


def test_parse_needs_header():
    with pytest.raises(TraceFormatError, match="header"):
        parse_trace("1.0 1 1\n")
    with pytest.raises(TraceFormatError, match="header"):
        parse_trace("")


def test_empty_trace_is_header_only():
    assert write_trace(Trace(3, 4)) == "k=3 m=4\n"
    assert parse_trace("k=3 m=4\n") == Trace(3, 4)


def test_round_trip_random_traces(rng):
    for _ in range(50):
        t = random_trace(rng)
        assert parse_trace(write_trace(t)) == t


def test_round_trip_generated():
    t = generate_synthetic(pair_heavy_config(n=500))
    assert parse_trace(write_trace(t)) == t
    adv = generate_adversarial(AdversaryConfig(rounds=4), CostParams(1, 1))
    assert parse_trace(write_trace(adv)) == adv


def test_synthetic_is_deterministic():
    cfg = pair_heavy_config(n=300, seed=7)
    assert generate_synthetic(cfg) == generate_synthetic(cfg)
    assert generate_synthetic(cfg) != generate_synthetic(pair_heavy_config(n=300, seed=8))


def test_synthetic_without_pairs():
    t = generate_synthetic(SyntheticConfig(k=4, m=3, n=400, pair_fraction=0.0, seed=1))
    assert len(t) == 400
    assert not any(r.is_pair for r in t)


def test_synthetic_single_hot_pair_dominates():
    t = generate_synthetic(SyntheticConfig(k=5, m=3, n=200, pair_fraction=1.0,
                                           hot_pairs=((1, 3, 1.0),), seed=3))
    history = pair_history(t.requests)
    assert len(history) == 200
    assert history.count((1, 3)) / len(history) == 1.0


def test_synthetic_times_strictly_increase():
    t = generate_synthetic(SyntheticConfig(k=3, m=2, n=2000, mean_gap=1e-300, seed=5))
    times = [r.time for r in t]
    assert all(a < b for a, b in zip(times, times[1:]))


@pytest.mark.parametrize("kwargs", [
    dict(pair_fraction=1.5),
    dict(hot_pairs=((0, 0, 0.5),)),
    dict(hot_pairs=((0, 1, 0.7), (1, 2, 0.6))),
    dict(hot_pairs=((0, 1, 0.0),)),
    dict(mean_gap=0.0),
    dict(k=1, pair_fraction=0.5),
])
def test_synthetic_config_validation(kwargs):
    base = dict(k=4, m=3, n=10)
    base.update(kwargs)
    with pytest.raises(ValueError):
        SyntheticConfig(**base)


def test_adversarial_layout():
    t = generate_adversarial(AdversaryConfig(rounds=3, gap=2.0), CostParams(1, 1))
    assert [(r.time, r.server, r.items) for r in t] == [
        (1.0, 1, (0, 1)), (3.0, 2, (0, 1)), (5.0, 3, (0, 1))]
    assert t.m == 4


def test_adversarial_single_round():
    t = generate_adversarial(AdversaryConfig(rounds=1), CostParams(1, 1))
    assert t.requests == (Request(1.0, 1, (0, 1)),)


def test_adversarial_validation():
    p = CostParams(1, 1)
    with pytest.raises(ValueError, match="gap"):
        generate_adversarial(AdversaryConfig(rounds=2, gap=1.0), p)
    with pytest.raises(ValueError, match="servers"):
        generate_adversarial(AdversaryConfig(rounds=3, gap=2.0, m=3), p)


@pytest.mark.parametrize("rounds", [1, 2, 6])
def test_adversarial_requests_always_miss_locally(rounds):
    params = CostParams(1, 1, 0.8)
    t = generate_adversarial(AdversaryConfig(rounds=rounds, gap=1.5), params)
    eng = PackCacheEngine(t.k, t.m, params)
    for r in t:
        eng.advance(r.time, inclusive=False)
        assert all(eng.state.E[d][r.server] is None for d in r.items)
        eng.arrive(r)
