"""Cost ledgers, run reports and real-price projection.

Two caching ledgers run side by side during a simulation:

* the *total* ledger charges every copy-second over ``[0, T_end]``,
  including lone copies kept alive only to avoid data loss and the origin
  copies sitting on server 1 before anyone uses them;
* the *proof* ledger charges only the retention window that follows each
  serve, capped at ``delta_t``. This is the per-request attribution used by
  the competitive-ratio argument.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .model import CostParams, Request

TRANSFER_KINDS = ("none", "single", "two_individual", "packed", "one_of_pair")

REPORT_FIELDS = (
    "n_requests",
    "transfer_cost",
    "caching_total",
    "caching_proof",
    "avg_transfer",
    "avg_total",
    "avg_proof",
    "proof_cost",
    "total_cost",
    "packed_count",
    "individual_pair_count",
    "single_transfer_count",
    "hit_count",
    "copy_time",
)


@dataclass(frozen=True)
class RequestRecord:
    request: Request
    charge: float
    kind: str


@dataclass(frozen=True)
class CostReport:
    """Immutable summary of one engine run.

    ``copy_time`` is the raw copy-seconds behind ``caching_total``; it is what
    the pricing projection needs. ``single_transfer_count`` counts requests
    served by exactly one transfer (a single item, or one missing half of a
    pair).
    """

    params: CostParams
    mode: str
    transfer_cost: float
    caching_cost_total: float
    caching_cost_proof: float
    copy_time: float
    n_requests: int
    packed_count: int
    individual_pair_count: int
    hit_count: int
    single_transfer_count: int
    per_request: Tuple[RequestRecord, ...] = field(repr=False, default=())
    trace_digest: str = ""
    horizon: float = 0.0

    def _avg(self, value):
        return value / self.n_requests if self.n_requests else 0.0

    @property
    def proof_cost(self) -> float:
        return proof_mode_cost(self)

    @property
    def total_cost(self) -> float:
        return self.transfer_cost + self.caching_cost_total

    @property
    def avg_transfer(self) -> float:
        return self._avg(self.transfer_cost)

    @property
    def avg_total(self) -> float:
        return self._avg(self.total_cost)

    @property
    def avg_proof(self) -> float:
        return self._avg(self.proof_cost)

    def as_row(self) -> dict:
        row = {
            "n_requests": self.n_requests,
            "transfer_cost": self.transfer_cost,
            "caching_total": self.caching_cost_total,
            "caching_proof": self.caching_cost_proof,
            "avg_transfer": self.avg_transfer,
            "avg_total": self.avg_total,
            "avg_proof": self.avg_proof,
            "proof_cost": self.proof_cost,
            "total_cost": self.total_cost,
            "packed_count": self.packed_count,
            "individual_pair_count": self.individual_pair_count,
            "single_transfer_count": self.single_transfer_count,
            "hit_count": self.hit_count,
            "copy_time": self.copy_time,
        }
        return row

    def summary(self) -> str:
        lines = [f"mode: {self.mode}"]
        p = self.params
        lines.append(f"params: mu={p.mu:g} lambda={p.lam:g} alpha={p.alpha:g} gamma={p.gamma:g}")
        for key, value in self.as_row().items():
            lines.append(f"{key}: {_fmt(value)}")
        return "\n".join(lines)


def _fmt(value):
    if isinstance(value, float):
        return repr(value)
    return str(value)


class CostLedger:
    """Mutable accumulator owned by a single engine run."""

    def __init__(self, params: CostParams):
        self.params = params
        self._copy_segments: List[float] = []
        self._proof_segments: List[float] = []
        self.records: List[RequestRecord] = []

    def accrue(self, duration: float, forced: bool = False, origin_pre_use: bool = False):
        """Charge a caching segment of ``duration`` time units.

        Only the non-forced, post-use part counts towards the proof ledger,
        and it is capped at one retention window.
        """
        if duration < 0:
            raise ValueError(f"negative caching segment: {duration}")
        self._copy_segments.append(duration)
        if not forced and not origin_pre_use:
            self._proof_segments.append(min(duration, self.params.delta_t))

    def record(self, request: Request, charge: float, kind: str):
        if kind not in TRANSFER_KINDS:
            raise ValueError(f"unknown transfer kind {kind!r}")
        self.records.append(RequestRecord(request, charge, kind))

    @property
    def caching_total(self) -> float:
        return self.params.mu * math.fsum(self._copy_segments)

    @property
    def caching_proof(self) -> float:
        return self.params.mu * math.fsum(self._proof_segments)

    def finalize(self, mode: str, trace_digest: str = "", horizon: float = 0.0) -> CostReport:
        kinds = [r.kind for r in self.records]
        copy_time = math.fsum(self._copy_segments)
        return CostReport(
            params=self.params,
            mode=mode,
            transfer_cost=math.fsum(r.charge for r in self.records),
            caching_cost_total=self.params.mu * copy_time,
            caching_cost_proof=self.caching_proof,
            copy_time=copy_time,
            n_requests=len(self.records),
            packed_count=kinds.count("packed"),
            individual_pair_count=kinds.count("two_individual"),
            hit_count=kinds.count("none"),
            single_transfer_count=kinds.count("single") + kinds.count("one_of_pair"),
            per_request=tuple(self.records),
            trace_digest=trace_digest,
            horizon=horizon,
        )


def accrue(ledger: CostLedger, duration: float, forced: bool = False, origin_pre_use: bool = False) -> CostLedger:
    ledger.accrue(duration, forced=forced, origin_pre_use=origin_pre_use)
    return ledger


def proof_mode_cost(report: CostReport) -> float:
    return report.transfer_cost + report.caching_cost_proof


def recompute_transfer_cost(report: CostReport) -> float:
    return math.fsum(r.charge for r in report.per_request)


@dataclass(frozen=True)
class PricingConfig:
    """Real-world prices.

    ``cache_price`` is per GB held for one ``period`` of simulated time;
    ``transfer_price`` is per GB moved.
    """

    cache_price: float = 0.04
    transfer_price: float = 0.08
    gb_per_item: float = 1.0
    period: float = 1.0

    def __post_init__(self):
        for name in ("cache_price", "transfer_price", "gb_per_item", "period"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be positive, got {value}")


@dataclass(frozen=True)
class Projection:
    packed_spend: float
    individual_spend: float
    saving: float
    gb_avoided: float

    @property
    def relative_saving(self) -> float:
        return self.saving / self.individual_spend if self.individual_spend else 0.0


def spend(report: CostReport, pricing: PricingConfig) -> float:
    # transfer_cost / lam is the number of (discounted) item transfers
    transfer_gb = report.transfer_cost / report.params.lam * pricing.gb_per_item
    cache_gb_periods = report.copy_time / pricing.period * pricing.gb_per_item
    return transfer_gb * pricing.transfer_price + cache_gb_periods * pricing.cache_price


def pricing_projection(packed: CostReport, individual: CostReport, pricing: PricingConfig) -> Projection:
    if packed.trace_digest != individual.trace_digest:
        raise ValueError("reports come from different traces")
    if (packed.params.mu, packed.params.lam) != (individual.params.mu, individual.params.lam):
        raise ValueError("reports come from different cost parameters")
    p = spend(packed, pricing)
    i = spend(individual, pricing)
    saving = i - p
    return Projection(p, i, saving, saving / pricing.transfer_price)


def reports_to_csv(rows: Sequence[dict], header: Optional[Sequence[str]] = None) -> str:
    buf = io.StringIO()
    if header is None:
        header = list(rows[0]) if rows else list(REPORT_FIELDS)
    writer = csv.DictWriter(buf, fieldnames=list(header), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _fmt(v) for k, v in row.items()})
    return buf.getvalue()
