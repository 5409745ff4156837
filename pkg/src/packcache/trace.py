"""Trace file I/O and request-sequence generators.

File format (UTF-8 text, 1-based ids)::

    k=<items> m=<servers>
    # comment
    <time> <server> <item> [<item2>]
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Iterable, List, Sequence, TextIO, Tuple, Union

import numpy as np

from .model import CostParams, Request, Trace, TraceError


class TraceFormatError(TraceError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def _parse_header(line: str, lineno: int) -> Tuple[int, int]:
    fields = {}
    for token in line.split():
        key, sep, value = token.partition("=")
        if not sep:
            raise TraceFormatError(lineno, f"bad header token {token!r}")
        try:
            fields[key] = int(value)
        except ValueError:
            raise TraceFormatError(lineno, f"header value {value!r} is not an integer") from None
    if set(fields) != {"k", "m"}:
        raise TraceFormatError(lineno, "header must be 'k=<int> m=<int>'")
    return fields["k"], fields["m"]


def parse_trace(source: Union[str, TextIO, Iterable[str]]) -> Trace:
    """Parse a trace from text, a file object or an iterable of lines."""
    if isinstance(source, str):
        source = io.StringIO(source)
    header = None
    requests: List[Request] = []
    prev_time = -math.inf
    for lineno, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            header = _parse_header(line, lineno)
            k, m = header
            continue
        parts = line.split()
        if len(parts) not in (3, 4):
            raise TraceFormatError(lineno, f"expected '<time> <server> <item> [<item2>]', got {line!r}")
        try:
            time = float(parts[0])
            server = int(parts[1]) - 1
            items = [int(p) - 1 for p in parts[2:]]
        except ValueError:
            raise TraceFormatError(lineno, f"malformed line {line!r}") from None
        if not math.isfinite(time) or time < 0:
            raise TraceFormatError(lineno, f"bad timestamp {parts[0]!r}")
        if len(items) == 2 and items[0] == items[1]:
            raise TraceFormatError(lineno, "items not distinct")
        if time == prev_time:
            raise TraceFormatError(lineno, f"duplicate timestamp {parts[0]}")
        if time < prev_time:
            raise TraceFormatError(lineno, "timestamps must be strictly increasing")
        if not 0 <= server < m:
            raise TraceFormatError(lineno, f"server id {server + 1} out of range 1..{m}")
        for item in items:
            if not 0 <= item < k:
                raise TraceFormatError(lineno, f"item id {item + 1} out of range 1..{k}")
        requests.append(Request(time, server, tuple(items)))
        prev_time = time
    if header is None:
        raise TraceFormatError(0, "missing 'k=<int> m=<int>' header")
    try:
        return Trace(header[0], header[1], tuple(requests))
    except TraceError as exc:
        raise TraceFormatError(1, str(exc)) from None


def write_trace(trace: Trace, out: TextIO = None) -> str:
    """Serialize ``trace``; also writes to ``out`` when one is given."""
    lines = [f"k={trace.k} m={trace.m}"]
    for r in trace.requests:
        ids = " ".join(str(d + 1) for d in r.items)
        lines.append(f"{r.time!r} {r.server + 1} {ids}")
    text = "\n".join(lines) + "\n"
    if out is not None:
        out.write(text)
    return text


@dataclass(frozen=True)
class SyntheticConfig:
    """Settings for the synthetic workload.

    A request is a pair with probability ``pair_fraction``. A pair request
    picks hot pair ``i`` with probability ``weight_i`` and a uniformly random
    distinct pair with the remaining ``1 - sum(weights)``. Inter-arrival
    gaps are exponential with mean ``mean_gap``; servers are uniform.
    """

    k: int = 10
    m: int = 50
    n: int = 5000
    pair_fraction: float = 0.5
    hot_pairs: Tuple[Tuple[int, int, float], ...] = field(default=())
    mean_gap: float = 1.0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "hot_pairs", tuple(tuple(h) for h in self.hot_pairs))
        if self.k < 1 or self.m < 2 or self.n < 0:
            raise ValueError(f"need k >= 1, m >= 2, n >= 0; got k={self.k} m={self.m} n={self.n}")
        if not 0 <= self.pair_fraction <= 1:
            raise ValueError(f"pair_fraction must be in [0,1], got {self.pair_fraction}")
        if self.pair_fraction > 0 and self.k < 2:
            raise ValueError("pair requests need k >= 2")
        if not (math.isfinite(self.mean_gap) and self.mean_gap > 0):
            raise ValueError(f"mean_gap must be > 0, got {self.mean_gap}")
        total = 0.0
        for a, b, w in self.hot_pairs:
            if a == b or not (0 <= a < self.k and 0 <= b < self.k):
                raise ValueError(f"bad hot pair ({a}, {b}) for k={self.k}")
            if not w > 0:
                raise ValueError(f"hot pair weight must be > 0, got {w}")
            total += w
        if total > 1 + 1e-12:
            raise ValueError(f"hot pair weights sum to {total} > 1")


def pair_heavy_config(n: int = 5000, k: int = 10, m: int = 50, seed: int = 2022) -> SyntheticConfig:
    """The fixed workload used for the trend checks and as the CLI default."""
    hot = ((0, 1, 0.12), (2, 3, 0.08), (4, 5, 0.06), (6, 7, 0.04), (8, 9, 0.03))
    hot = tuple(h for h in hot if h[0] < k and h[1] < k)
    return SyntheticConfig(k=k, m=m, n=n, pair_fraction=0.8, hot_pairs=hot, mean_gap=1.0, seed=seed)


def generate_synthetic(config: SyntheticConfig) -> Trace:
    rng = np.random.default_rng(config.seed)
    n, k, m = config.n, config.k, config.m
    times = np.cumsum(rng.exponential(config.mean_gap, n))
    servers = rng.integers(0, m, n)
    is_pair = rng.random(n) < config.pair_fraction
    pick = rng.random(n)
    first = rng.integers(0, k, n)
    second = rng.integers(0, max(k - 1, 1), n)

    hot = config.hot_pairs
    cum = np.cumsum([w for _, _, w in hot]) if hot else np.zeros(0)
    hot_idx = np.searchsorted(cum, pick, side="right")

    requests = []
    prev = -math.inf
    for i in range(n):
        t = float(times[i])
        if t <= prev:
            t = math.nextafter(prev, math.inf)
        prev = t
        if is_pair[i]:
            h = int(hot_idx[i])
            if h < len(hot):
                items = (hot[h][0], hot[h][1])
            else:
                a = int(first[i])
                b = int(second[i])
                if b >= a:
                    b += 1
                items = (a, b)
        else:
            items = (int(first[i]),)
        requests.append(Request(t, int(servers[i]), items))
    return Trace(k, m, tuple(requests))


@dataclass(frozen=True)
class AdversaryConfig:
    """Repeated requests for one pair, each at a server that has never seen it.

    ``gap`` must exceed the retention window so every non-forced copy has
    expired before the next round.
    """

    rounds: int = 1
    gap: float = 2.0
    m: int = 0  # 0 means rounds + 1
    start: float = 1.0

    @property
    def servers(self) -> int:
        return self.m if self.m else self.rounds + 1


def generate_adversarial(config: AdversaryConfig, params: CostParams) -> Trace:
    if config.rounds < 0:
        raise ValueError("rounds must be >= 0")
    if not config.gap > params.delta_t:
        raise ValueError(f"gap {config.gap} must exceed delta_t {params.delta_t}")
    m = config.servers
    if m < config.rounds + 1 or m < 2:
        raise ValueError(f"{config.rounds} rounds need at least {config.rounds + 1} servers, got {m}")
    requests = tuple(
        Request(config.start + i * config.gap, i + 1, (0, 1)) for i in range(config.rounds)
    )
    return Trace(2, m, requests)


def pair_history(requests: Sequence[Request]) -> List[Tuple[int, int]]:
    return [r.items for r in requests if r.is_pair]
