import csv
import io

import pytest

from packcache.accounting import (REPORT_FIELDS, CostLedger, PricingConfig,
                                  accrue, pricing_projection, proof_mode_cost,
                                  recompute_transfer_cost, reports_to_csv)
from packcache.engine import Mode, run_trace
from packcache.model import CostParams, Request, Trace
from packcache.trace import generate_synthetic, pair_heavy_config

from conftest import random_trace

P = CostParams(mu=2, lam=4, alpha=0.8, gamma=0.01)  # delta_t = 2


def test_accrue_full_window():
    ledger = accrue(CostLedger(P), P.delta_t)
    assert ledger.caching_total == P.lam
    assert ledger.caching_proof == P.lam


def test_accrue_forced_segment():
    ledger = accrue(CostLedger(P), P.delta_t, forced=True)
    assert (ledger.caching_total, ledger.caching_proof) == (P.lam, 0.0)


def test_accrue_origin_pre_use():
    ledger = accrue(CostLedger(P), 5.0, origin_pre_use=True)
    assert (ledger.caching_total, ledger.caching_proof) == (10.0, 0.0)


def test_accrue_caps_proof_window():
    ledger = accrue(CostLedger(P), 3.0)
    assert (ledger.caching_total, ledger.caching_proof) == (6.0, 4.0)


def test_accrue_rejects_negative():
    with pytest.raises(ValueError):
        CostLedger(P).accrue(-0.1)


def test_proof_cost_all_hits():
    p = CostParams(1, 1, 0.8, 0.01)
    t = Trace(1, 2, (Request(0.2, 0, (0,)), Request(0.5, 0, (0,)), Request(1.1, 0, (0,))))
    r = run_trace(t, p)
    assert r.transfer_cost == 0.0
    # windows 0.3 and 0.6 between hits plus the last full window
    assert proof_mode_cost(r) == pytest.approx(0.3 + 0.6 + 1.0)


def test_proof_never_exceeds_total(rng):
    for _ in range(100):
        t = random_trace(rng, n_max=100)
        r = run_trace(t, P)
        assert r.caching_cost_proof <= r.caching_cost_total
        assert r.proof_cost <= r.total_cost


def test_totals_recompute_exactly(rng):
    for _ in range(30):
        r = run_trace(random_trace(rng, n_max=150), P)
        assert recompute_transfer_cost(r) == r.transfer_cost
        counts = [x.kind for x in r.per_request]
        assert r.packed_count == counts.count("packed")
        assert r.n_requests == len(r.per_request)
        if r.n_requests:
            assert r.avg_transfer == r.transfer_cost / r.n_requests


def test_csv_schema_is_fixed():
    r = run_trace(generate_synthetic(pair_heavy_config(n=100)), P)
    text = reports_to_csv([r.as_row()])
    rows = list(csv.DictReader(io.StringIO(text)))
    assert tuple(rows[0]) == REPORT_FIELDS
    assert float(rows[0]["transfer_cost"]) == r.transfer_cost
    assert "avg_proof: " in r.summary()


def _both(alpha, n=1500):
    p = CostParams(3, 3, alpha, 0.01)
    t = generate_synthetic(pair_heavy_config(n=n))
    return run_trace(t, p, Mode.PACKED), run_trace(t, p, Mode.INDIVIDUAL)


def test_pricing_saving_matches_packed_transfers():
    pricing = PricingConfig(cache_price=0.04, transfer_price=0.08, gb_per_item=2.0, period=24.0)
    packed, indiv = _both(0.8)
    proj = pricing_projection(packed, indiv, pricing)
    scale = pricing.transfer_price * pricing.gb_per_item / packed.params.lam
    expected = (1 - 0.8) * packed.params.lam * packed.packed_count * 2 * scale
    assert proj.saving == pytest.approx(expected, rel=1e-9)
    assert proj.gb_avoided == pytest.approx(proj.saving / 0.08)
    assert proj.individual_spend - proj.packed_spend == pytest.approx(proj.saving)


def test_pricing_alpha_trend():
    pricing = PricingConfig()
    s6 = pricing_projection(*_both(0.6), pricing).saving
    s8 = pricing_projection(*_both(0.8), pricing).saving
    assert s6 > s8 > 0
    assert pricing_projection(*_both(1.0), pricing).saving == 0.0


def test_pricing_rejects_mismatched_runs():
    packed, _ = _both(0.8, n=200)
    _, other = _both(0.8, n=300)
    with pytest.raises(ValueError, match="different traces"):
        pricing_projection(packed, other, PricingConfig())
    with pytest.raises(ValueError):
        PricingConfig(cache_price=0)
