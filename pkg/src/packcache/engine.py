"""The online packable caching algorithm and its individually-served baseline.

Event loop rules:

* arrivals are processed before expirations that fall on the same instant,
  so a request exactly at a copy's expiry time is still a local hit;
* expiration events are never cancelled. An event fires only if its due
  time still equals the copy's current expiration, otherwise it is stale;
* the run ends at ``T_end = last request time + delta_t``. Lone-copy
  retention past that point is not charged.

The frequent-pair set used to serve a pair request is mined from the pair
history *before* that request; the request joins the history after it has
been served. ``mining_order="insert_first"`` gives the literal
insert-then-mine order instead.
"""

from __future__ import annotations

import enum
import hashlib
import heapq
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

from .accounting import CostLedger, CostReport
from .fpm import EMPTY, FpTree, FrequentSet
from .model import CostParams, Request, Trace, TraceError


class Mode(str, enum.Enum):
    PACKED = "packed"
    INDIVIDUAL = "individual"


MINING_ORDERS = ("before", "insert_first")

# kinds of the caching segment a copy is currently in
_WINDOW, _FORCED, _PRE_USE = 0, 1, 2


@dataclass(frozen=True)
class ServeOutcome:
    charge: float
    kind: str
    sources: Tuple[int, ...] = ()


@dataclass(frozen=True)
class Event:
    time: float
    kind: str  # "arrival" or "expiration"
    request: Optional[Request] = None
    item: Optional[int] = None
    server: Optional[int] = None


class EngineState:
    """Per-run trackers.

    ``E[d][j]`` is the expiration time of item ``d`` on server ``j`` (``None``
    when no copy is alive), ``c[d]`` the number of alive copies and
    ``r_prev[d][j]`` the time ``d`` was last served on ``j``.
    """

    def __init__(self, k: int, m: int, params: CostParams):
        if k < 1 or m < 2:
            raise ValueError(f"need k >= 1 and m >= 2, got k={k} m={m}")
        self.k = k
        self.m = m
        self.params = params
        dt = params.delta_t
        self.E: List[List[Optional[float]]] = [[None] * m for _ in range(k)]
        self.r_prev: List[List[Optional[float]]] = [[None] * m for _ in range(k)]
        self.forced = [[False] * m for _ in range(k)]
        self.seg_start = [[0.0] * m for _ in range(k)]
        self.seg_kind = [[_WINDOW] * m for _ in range(k)]
        self.c = [1] * k
        for d in range(k):
            self.E[d][0] = dt
            self.seg_kind[d][0] = _PRE_USE
        self.clock = 0.0
        self.freq: FrequentSet = EMPTY

    def snapshot(self):
        return (
            tuple(tuple(row) for row in self.E),
            tuple(self.c),
            tuple(tuple(row) for row in self.r_prev),
        )

    def holders(self, item: int) -> List[int]:
        return [j for j, e in enumerate(self.E[item]) if e is not None]

    def invariant_violations(self, now: Optional[float] = None) -> List[str]:
        now = self.clock if now is None else now
        dt = self.params.delta_t
        problems = []
        for d in range(self.k):
            alive = sum(e is not None for e in self.E[d])
            if alive != self.c[d]:
                problems.append(f"c[{d}]={self.c[d]} but {alive} alive copies")
            if self.c[d] < 1:
                problems.append(f"item {d} lost")
            for j, e in enumerate(self.E[d]):
                if e is None or self.forced[d][j]:
                    continue
                last = self.r_prev[d][j]
                if last is None:
                    last = 0.0
                if now > last + dt:
                    problems.append(f"copy ({d},{j}) idle {now - last} > {dt}")
        return problems


def init_state(k: int, m: int, params: CostParams) -> EngineState:
    return EngineState(k, m, params)


Observer = Callable[["PackCacheEngine", Event], None]


class PackCacheEngine:
    def __init__(self, k: int, m: int, params: CostParams, mode=Mode.PACKED,
                 mining_order: str = "before"):
        if mining_order not in MINING_ORDERS:
            raise ValueError(f"mining_order must be one of {MINING_ORDERS}")
        self.params = params
        self.mode = Mode(mode)
        self.mining_order = mining_order
        self.state = EngineState(k, m, params)
        self.miner = FpTree()
        self.ledger = CostLedger(params)
        self._pending: list = []
        self._seq = 0
        self._last_arrival = -math.inf
        for d in range(k):
            self._schedule(d, 0, self.state.E[d][0])

    # -- bookkeeping -----------------------------------------------------

    def _schedule(self, item, server, due):
        self._seq += 1
        heapq.heappush(self._pending, (due, self._seq, item, server))

    def _close_segment(self, item, server, now):
        s = self.state
        kind = s.seg_kind[item][server]
        self.ledger.accrue(now - s.seg_start[item][server],
                           forced=kind == _FORCED, origin_pre_use=kind == _PRE_USE)

    def _touch(self, item, server, now, placed):
        """Serve ``item`` on ``server`` at ``now``, placing a copy if needed."""
        s = self.state
        if placed:
            s.c[item] += 1
        else:
            self._close_segment(item, server, now)
        s.seg_start[item][server] = now
        s.seg_kind[item][server] = _WINDOW
        s.forced[item][server] = False
        due = now + self.params.delta_t
        s.E[item][server] = due
        s.r_prev[item][server] = now
        self._schedule(item, server, due)

    def choose_source(self, items, requester: int) -> int:
        """Lowest-indexed server other than ``requester`` holding every item."""
        E = self.state.E
        for j in range(self.state.m):
            if j != requester and all(E[d][j] is not None for d in items):
                return j
        raise LookupError(f"no server holds {tuple(items)}")

    def _packed_source(self, pair, requester) -> Optional[int]:
        try:
            return self.choose_source(pair, requester)
        except LookupError:
            return None

    # -- the three algorithm components ----------------------------------

    def handle_request(self, request: Request, freq: Optional[FrequentSet] = None) -> ServeOutcome:
        s = self.state
        t, j = request.time, request.server
        if t < s.clock or t <= self._last_arrival:
            raise TraceError(f"request at {t} is out of time order")
        if not 0 <= j < s.m or any(not 0 <= d < s.k for d in request.items):
            raise TraceError(f"request {request} has ids out of range")
        freq = s.freq if freq is None else freq
        lam = self.params.lam
        s.clock = t
        self._last_arrival = t

        missing = [d for d in request.items if s.E[d][j] is None]
        present = [d for d in request.items if s.E[d][j] is not None]
        if not missing:
            outcome = ServeOutcome(0.0, "none")
        elif len(request.items) == 1:
            outcome = ServeOutcome(lam, "single", (self.choose_source(missing, j),))
        elif len(missing) == 1:
            outcome = ServeOutcome(lam, "one_of_pair", (self.choose_source(missing, j),))
        else:
            source = None
            alpha = self.params.alpha
            if self.mode is Mode.PACKED and alpha < 1 and request.items in freq:
                source = self._packed_source(request.items, j)
            if source is not None:
                outcome = ServeOutcome(2 * alpha * lam, "packed", (source,))
            else:
                srcs = tuple(self.choose_source((d,), j) for d in missing)
                outcome = ServeOutcome(2 * lam, "two_individual", srcs)

        for d in present:
            self._touch(d, j, t, placed=False)
        for d in missing:
            self._touch(d, j, t, placed=True)
        self.ledger.record(request, outcome.charge, outcome.kind)
        return outcome

    def handle_expiration(self, item: int, server: int, due: float) -> str:
        """Returns ``"stale"``, ``"extended"`` or ``"dropped"``."""
        s = self.state
        if s.E[item][server] is None or s.E[item][server] != due:
            return "stale"
        s.clock = max(s.clock, due)
        self._close_segment(item, server, due)
        if s.c[item] == 1:
            new_due = due + self.params.delta_t
            s.E[item][server] = new_due
            s.forced[item][server] = True
            s.seg_start[item][server] = due
            if s.seg_kind[item][server] != _PRE_USE:
                s.seg_kind[item][server] = _FORCED
            self._schedule(item, server, new_due)
            return "extended"
        s.E[item][server] = None
        s.forced[item][server] = False
        s.c[item] -= 1
        return "dropped"

    def arrive(self, request: Request) -> ServeOutcome:
        """Mine, serve and record one arrival."""
        if request.is_pair:
            if self.mining_order == "insert_first":
                self.miner.insert_transaction(request.items)
            self.state.freq = self.miner.mine_frequent_pairs(self.params.gamma)
            outcome = self.handle_request(request)
            if self.mining_order == "before":
                self.miner.insert_transaction(request.items)
            return outcome
        return self.handle_request(request)

    # -- event loop ------------------------------------------------------

    def advance(self, until: float, inclusive: bool, observer: Optional[Observer] = None):
        """Fire pending expirations due before ``until`` (or at it, if inclusive)."""
        pending = self._pending
        while pending and (pending[0][0] < until or (inclusive and pending[0][0] == until)):
            due, _, item, server = heapq.heappop(pending)
            result = self.handle_expiration(item, server, due)
            if observer is not None and result != "stale":
                observer(self, Event(due, "expiration", item=item, server=server))

    def run(self, requests: Sequence[Request], observer: Optional[Observer] = None,
            trace_digest: str = "") -> CostReport:
        for req in requests:
            self.advance(req.time, inclusive=False, observer=observer)
            self.arrive(req)
            if observer is not None:
                observer(self, Event(req.time, "arrival", request=req))
        horizon = requests[-1].time + self.params.delta_t if requests else 0.0
        self.advance(horizon, inclusive=True, observer=observer)
        self.finish(horizon)
        return self.ledger.finalize(self.mode.value, trace_digest=trace_digest, horizon=horizon)

    def finish(self, horizon: float):
        s = self.state
        for d in range(s.k):
            for j in range(s.m):
                if s.E[d][j] is not None:
                    self._close_segment(d, j, horizon)


def trace_digest(trace: Trace) -> str:
    h = hashlib.sha256(f"{trace.k} {trace.m}\n".encode())
    for r in trace.requests:
        h.update(f"{r.time!r} {r.server} {r.items}\n".encode())
    return h.hexdigest()


def run_trace(trace: Trace, params: CostParams, mode=Mode.PACKED,
              observer: Optional[Observer] = None, mining_order: str = "before") -> CostReport:
    engine = PackCacheEngine(trace.k, trace.m, params, mode=mode, mining_order=mining_order)
    return engine.run(trace.requests, observer=observer, trace_digest=trace_digest(trace))
