"""Offline reference costs.

``proof_mode_opt`` is the decoupled per-request optimum that the
competitive-ratio argument compares against. ``dp_total_opt`` is an exact
dynamic program over standard-form schedules (all transfers happen at
request instants) and prices every copy-second over ``[0, T_end]``.

DP state between two instants is one non-empty server bitmask per item. At
each instant the requester first receives its missing items (individually
at ``lam`` each, or as a package at ``2 * alpha * lam`` from a server
already holding both), then any copies may be dropped as long as each item
keeps at least one.
"""

from __future__ import annotations

import math
import random
from typing import Dict, Optional

import numpy as np

from .fpm import FrequentSet, naive_frequent_pairs
from .model import CostParams, Trace

DEFAULT_BUDGET = 10**7


class OracleBudgetExceeded(RuntimeError):
    pass


def offline_frequent_pairs(trace: Trace, gamma: float) -> FrequentSet:
    """Pairs frequent over the whole trace: clairvoyant co-utilisation."""
    return naive_frequent_pairs([r.items for r in trace.pair_requests], gamma)


def proof_mode_opt(trace: Trace, params: CostParams, freq: FrequentSet) -> float:
    mu, lam, alpha = params.mu, params.lam, params.alpha
    last: Dict[tuple, float] = {}
    terms = []
    for r in trace.requests:
        gaps = []
        for d in r.items:
            prev = last.get((d, r.server))
            gaps.append(math.inf if prev is None else r.time - prev)
            last[(d, r.server)] = r.time
        # min(mu * g, lam) with g = inf handled without inf * 0 surprises
        local = [lam if math.isinf(g) else min(mu * g, lam) for g in gaps]
        if len(gaps) == 2 and r.items in freq:
            terms.append(min(local[0] + local[1], 2 * alpha * lam))
        else:
            terms.append(sum(local))
    return math.fsum(terms)


def dp_state_count(k: int, m: int) -> int:
    return (2**m - 1) ** k


def dp_total_opt(trace: Trace, params: CostParams, freq: FrequentSet,
                 budget: int = DEFAULT_BUDGET, packing: bool = True) -> float:
    """Exact minimum total cost; ``packing=False`` never discounts."""
    k, m, n = trace.k, trace.m, len(trace.requests)
    if dp_state_count(k, m) * max(n, 1) > budget:
        raise OracleBudgetExceeded(
            f"(2^{m}-1)^{k} * {n} exceeds budget {budget}: instance too large for exact oracle")
    if n == 0:
        return 0.0
    mu, lam, alpha = params.mu, params.lam, params.alpha
    size = 1 << m
    shape = (size,) * k

    masks = np.indices(shape).reshape(k, -1)  # masks[d, idx] = server mask of item d
    popcount = np.array([bin(x).count("1") for x in range(size)])
    copies = popcount[masks].sum(axis=0).reshape(shape).astype(float)
    valid = (masks != 0).all(axis=0).reshape(shape)

    value = np.full(shape, np.inf)
    value[(1,) * k] = 0.0  # everything on server 0 at t=0
    now = 0.0

    for r in trace.requests:
        value = value + mu * copies * (r.time - now)
        now = r.time
        bit = 1 << r.server

        # transfers to the requester
        new = masks.copy()
        cost = np.zeros(masks.shape[1])
        missing = [(masks[d] & bit) == 0 for d in r.items]
        for d, miss in zip(r.items, missing):
            new[d] |= bit
            cost += np.where(miss, lam, 0.0)
        if len(r.items) == 2 and packing and alpha < 1 and r.items in freq:
            a, b = r.items
            both = missing[0] & missing[1]
            dual = (masks[a] & masks[b]) != 0
            cost = np.where(both & dual, 2 * alpha * lam, cost)
        target = np.ravel_multi_index(tuple(new), shape)
        flat = np.full(value.size, np.inf)
        np.minimum.at(flat, target, value.ravel() + cost)
        value = flat.reshape(shape)

        # drops: every configuration can reach all of its sub-configurations
        for d in range(k):
            for b in range(m):
                src = [slice(None)] * k
                dst = [slice(None)] * k
                with_bit = [x for x in range(size) if x & (1 << b)]
                src[d] = with_bit
                dst[d] = [x ^ (1 << b) for x in with_bit]
                value[tuple(dst)] = np.minimum(value[tuple(dst)], value[tuple(src)])
        value[~valid] = np.inf

    value = value + mu * copies * params.delta_t
    return float(value.min())


def sample_schedule_cost(trace: Trace, params: CostParams, freq: FrequentSet,
                         rng: Optional[random.Random] = None, drop_prob: float = 0.5) -> float:
    """Cost of one random feasible standard-form schedule.

    Walks the requests forward with explicit server sets, so it shares no
    code with the DP it is used to check.
    """
    rng = rng or random.Random()
    mu, lam, alpha = params.mu, params.lam, params.alpha
    holders = [{0} for _ in range(trace.k)]
    now = 0.0
    caching, transfers = [], []
    for r in trace.requests:
        caching.append(mu * sum(len(h) for h in holders) * (r.time - now))
        now = r.time
        j = r.server
        missing = [d for d in r.items if j not in holders[d]]
        if len(missing) == 2 and r.items in freq and alpha < 1:
            dual = holders[missing[0]] & holders[missing[1]]
            if dual and rng.random() < 0.7:
                transfers.append(2 * alpha * lam)
            else:
                transfers.append(2 * lam)
        else:
            transfers.append(lam * len(missing))
        for d in missing:
            holders[d].add(j)
        for h in holders:
            for s in sorted(h):
                if len(h) > 1 and rng.random() < drop_prob:
                    h.discard(s)
    caching.append(mu * sum(len(h) for h in holders) * params.delta_t)
    return math.fsum(caching) + math.fsum(transfers)
