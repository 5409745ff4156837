"""Domain types shared by the simulator, the miner and the oracles.

Ids are 0-based internally. Anything written to a file or printed for a
human uses 1-based ids to line up with the usual s_1 / d_1 notation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Tuple


class ParamError(ValueError):
    """Raised when a cost parameter is outside its legal domain."""


class TraceError(ValueError):
    """Raised when a request sequence violates the trace invariants."""


@dataclass(frozen=True)
class CostParams:
    """Homogeneous cost model.

    ``mu`` is the caching price per item per time unit, ``lam`` the price of
    transferring one item between any two servers, ``alpha`` the discount on
    a packed transfer and ``gamma`` the minimum support of a frequent pair.
    """

    mu: float = 3.0
    lam: float = 3.0
    alpha: float = 0.8
    gamma: float = 0.01

    def __post_init__(self):
        for name in ("mu", "lam", "alpha", "gamma"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise ParamError(f"{name} must be a real number, got {value!r}")
            if not math.isfinite(value):
                raise ParamError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))
        if self.mu <= 0:
            raise ParamError(f"mu must be > 0, got {self.mu}")
        if self.lam <= 0:
            raise ParamError(f"lambda must be > 0, got {self.lam}")
        if not 0 < self.alpha <= 1:
            raise ParamError(f"alpha must be in (0,1], got {self.alpha}")
        if not 0 < self.gamma <= 1:
            raise ParamError(f"gamma must be in (0,1], got {self.gamma}")
        dt = self.lam / self.mu
        if not (math.isfinite(dt) and dt > 0):
            raise ParamError(f"lambda/mu must be finite and > 0, got {dt}")

    @property
    def delta_t(self) -> float:
        return derive_delta_t(self)

    def replace(self, **changes) -> "CostParams":
        values = {"mu": self.mu, "lam": self.lam, "alpha": self.alpha, "gamma": self.gamma}
        values.update(changes)
        return CostParams(**values)


def derive_delta_t(params: CostParams) -> float:
    """Break-even retention window: holding a copy this long costs one transfer."""
    return params.lam / params.mu


def validate_params(mu, lam, alpha, gamma) -> CostParams:
    """Build a :class:`CostParams`, raising :class:`ParamError` on bad input."""
    return CostParams(mu=mu, lam=lam, alpha=alpha, gamma=gamma)


@dataclass(frozen=True)
class Request:
    """A demand for one or two distinct items at ``server`` at ``time``.

    ``items`` is stored sorted so two requests for the same pair compare equal
    regardless of the order the ids were given in.
    """

    time: float
    server: int
    items: Tuple[int, ...]

    def __post_init__(self):
        items = tuple(sorted(int(i) for i in self.items))
        if not 1 <= len(items) <= 2:
            raise TraceError(f"a request holds 1 or 2 items, got {len(items)}")
        if len(items) == 2 and items[0] == items[1]:
            raise TraceError("items not distinct")
        time = float(self.time)
        if not math.isfinite(time) or time < 0:
            raise TraceError(f"timestamp must be finite and >= 0, got {self.time!r}")
        object.__setattr__(self, "items", items)
        object.__setattr__(self, "time", time)
        object.__setattr__(self, "server", int(self.server))

    @property
    def is_pair(self) -> bool:
        return len(self.items) == 2


@dataclass(frozen=True)
class Trace:
    """An ordered request sequence over ``k`` items and ``m`` servers."""

    k: int
    m: int
    requests: Tuple[Request, ...] = field(default=())

    def __post_init__(self):
        requests = tuple(self.requests)
        object.__setattr__(self, "requests", requests)
        if self.k < 1:
            raise TraceError(f"k must be >= 1, got {self.k}")
        if self.m < 2:
            raise TraceError(f"m must be >= 2, got {self.m}")
        prev = -math.inf
        for pos, req in enumerate(requests):
            if req.time == prev:
                raise TraceError(f"duplicate timestamp {req.time} at request {pos + 1}")
            if req.time < prev:
                raise TraceError(f"timestamps not increasing at request {pos + 1}")
            if not 0 <= req.server < self.m:
                raise TraceError(f"server id {req.server + 1} out of range at request {pos + 1}")
            for item in req.items:
                if not 0 <= item < self.k:
                    raise TraceError(f"item id {item + 1} out of range at request {pos + 1}")
            prev = req.time

    def __len__(self):
        return len(self.requests)

    def __iter__(self):
        return iter(self.requests)

    @property
    def pair_requests(self) -> Iterable[Request]:
        return (r for r in self.requests if r.is_pair)

    @property
    def end_time(self) -> float:
        """Time of the last request, 0 for an empty trace."""
        return self.requests[-1].time if self.requests else 0.0
