"""Command-line front end and experiment sweeps.

Subcommands: ``simulate``, ``sweep``, ``compare``, ``oracle``, ``generate``
and ``pricing``. Exit codes: 0 success, 1 usage error, 2 validation error,
3 oracle budget exceeded.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, List, Optional, Sequence

from .accounting import (REPORT_FIELDS, PricingConfig, pricing_projection,
                         reports_to_csv)
from .engine import Mode, run_trace
from .model import CostParams, ParamError, Trace, TraceError
from .oracle import (DEFAULT_BUDGET, OracleBudgetExceeded, dp_total_opt,
                     offline_frequent_pairs, proof_mode_opt)
from .trace import (AdversaryConfig, SyntheticConfig, generate_adversarial,
                    generate_synthetic, pair_heavy_config, parse_trace,
                    write_trace)

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_BUDGET = 0, 1, 2, 3

SWEEP_PARAMS = ("rho", "gamma", "alpha", "servers", "items", "requests")
SWEEP_HEADER = ("param", "value", "mode", "seed") + REPORT_FIELDS


def fixed_sum(total: float) -> Callable[[CostParams, float], CostParams]:
    """Coupling for a rho sweep: ``lam / mu = rho`` with ``lam + mu = total``."""

    def couple(params: CostParams, rho: float) -> CostParams:
        mu = total / (1 + rho)
        return params.replace(mu=mu, lam=total - mu)

    return couple


@dataclass
class SweepSpec:
    param: str
    values: Sequence[float]
    params: CostParams = field(default_factory=CostParams)
    workload: SyntheticConfig = field(default_factory=pair_heavy_config)
    trace: Optional[Trace] = None
    couple: Optional[Callable[[CostParams, float], CostParams]] = None
    modes: Sequence[Mode] = (Mode.PACKED, Mode.INDIVIDUAL)

    def __post_init__(self):
        if self.param not in SWEEP_PARAMS:
            raise ValueError(f"cannot sweep {self.param!r}; choose from {SWEEP_PARAMS}")
        if self.trace is not None and self.param in ("servers", "items", "requests"):
            raise ValueError(f"sweeping {self.param} needs a generated workload, not a fixed trace")
        if self.param == "rho" and self.couple is None:
            self.couple = fixed_sum(6.0)
        for v in self.values:
            self.cell_inputs(v)  # validates every value up front

    def cell_inputs(self, value):
        params, workload = self.params, self.workload
        if self.param == "rho":
            if not value > 0:
                raise ParamError(f"rho must be > 0, got {value}")
            params = self.couple(params, value)
        elif self.param == "gamma":
            params = params.replace(gamma=value)
        elif self.param == "alpha":
            params = params.replace(alpha=value)
        elif self.param == "servers":
            workload = replace(workload, m=int(value))
        elif self.param == "items":
            k = int(value)
            workload = replace(workload, k=k,
                               hot_pairs=tuple(h for h in workload.hot_pairs if max(h[0], h[1]) < k))
        elif self.param == "requests":
            workload = replace(workload, n=int(value))
        return params, workload


def _run_cell(args):
    trace, params, mode = args
    return run_trace(trace, params, mode)


def sweep(spec: SweepSpec, jobs: int = 1) -> List[dict]:
    """One row per (value, mode), in sweep order."""
    cells, keys = [], []
    traces = {}
    for value in spec.values:
        params, workload = spec.cell_inputs(value)
        if spec.trace is not None:
            trace = spec.trace
        else:
            if workload not in traces:
                traces[workload] = generate_synthetic(workload)
            trace = traces[workload]
        for mode in spec.modes:
            cells.append((trace, params, Mode(mode)))
            keys.append((value, Mode(mode).value))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_run_cell, cells))
    else:
        reports = [_run_cell(c) for c in cells]
    rows = []
    for (value, mode), report in zip(keys, reports):
        row = {"param": spec.param, "value": value, "mode": mode, "seed": spec.workload.seed}
        row.update(report.as_row())
        rows.append(row)
    return rows


def plot_sweep(rows: List[dict], path, metric: str = "avg_transfer"):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 3.5))
    for mode in ("packed", "individual"):
        pts = [(r["value"], r[metric]) for r in rows if r["mode"] == mode]
        if pts:
            xs, ys = zip(*pts)
            ax.plot(xs, ys, marker="o", label=mode)
    ax.set_xlabel(rows[0]["param"] if rows else "")
    ax.set_ylabel(metric.replace("_", " "))
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def compare(trace: Trace, params: CostParams, budget: int = DEFAULT_BUDGET) -> dict:
    report = run_trace(trace, params, Mode.PACKED)
    freq = offline_frequent_pairs(trace, params.gamma)
    opt = proof_mode_opt(trace, params, freq)
    out = {
        "engine_proof": report.proof_cost,
        "engine_total": report.total_cost,
        "proof_opt": opt,
        "proof_ratio": report.proof_cost / opt if opt > 0 else float("nan"),
        "bound": 2 / params.alpha,
        "dp_opt": None,
        "total_ratio": None,
    }
    try:
        dp = dp_total_opt(trace, params, freq, budget=budget)
    except OracleBudgetExceeded as exc:
        out["dp_notice"] = str(exc)
    else:
        out["dp_opt"] = dp
        out["total_ratio"] = report.total_cost / dp if dp > 0 else float("nan")
    return out


# -- argument handling --------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser):
    p.add_argument("--mu", type=float, default=3.0)
    p.add_argument("--lambda", dest="lam", type=float, default=3.0)
    p.add_argument("--alpha", type=float, default=0.8)
    p.add_argument("--gamma", type=float, default=0.01)
    p.add_argument("--servers", type=int, default=50)
    p.add_argument("--items", type=int, default=10)
    p.add_argument("--requests", type=int, default=5000)
    p.add_argument("--seed", type=int, default=2022)
    p.add_argument("--trace", type=Path, help="trace file; a synthetic workload is generated otherwise")
    p.add_argument("--out", type=Path, help="write CSV (or the trace) here")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="packcache", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="run the engine once and print its report")
    _common(p)
    p.add_argument("--mode", choices=[m.value for m in Mode], default="packed")

    p = sub.add_parser("sweep", help="sweep one parameter across both modes")
    _common(p)
    p.add_argument("--param", choices=SWEEP_PARAMS, required=True)
    p.add_argument("--values", type=float, nargs="+", required=True)
    p.add_argument("--rho-sum", type=float, default=6.0, help="lambda + mu held fixed in a rho sweep")
    p.add_argument("--plot", action="store_true", help="also write an SVG chart next to --out")
    p.add_argument("--jobs", type=int, default=1)

    for name, text in (("compare", "engine cost against the offline oracles"),
                       ("oracle", "offline optimum only")):
        p = sub.add_parser(name, help=text)
        _common(p)
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)

    p = sub.add_parser("generate", help="write a synthetic or adversarial trace")
    _common(p)
    p.add_argument("--adversarial", action="store_true")
    p.add_argument("--rounds", type=int, default=1)
    p.add_argument("--gap", type=float, default=None, help="adversarial gap (default 2 * delta_t)")
    p.add_argument("--pair-fraction", type=float, default=None)
    p.add_argument("--hot-pair", action="append", default=None, metavar="A,B,W",
                   help="1-based hot pair with its probability weight; repeatable")
    p.add_argument("--mean-gap", type=float, default=None)

    p = sub.add_parser("pricing", help="project both modes onto real prices")
    _common(p)
    p.add_argument("--cache-price", type=float, default=0.04)
    p.add_argument("--transfer-price", type=float, default=0.08)
    p.add_argument("--gb-per-item", type=float, default=1.0)
    p.add_argument("--period", type=float, default=1.0)
    return parser


def _params(args) -> CostParams:
    return CostParams(mu=args.mu, lam=args.lam, alpha=args.alpha, gamma=args.gamma)


def _workload(args) -> SyntheticConfig:
    base = pair_heavy_config(n=args.requests, k=args.items, m=args.servers, seed=args.seed)
    changes = {}
    if getattr(args, "pair_fraction", None) is not None:
        changes["pair_fraction"] = args.pair_fraction
    if getattr(args, "mean_gap", None) is not None:
        changes["mean_gap"] = args.mean_gap
    if getattr(args, "hot_pair", None):
        hot = []
        for spec in args.hot_pair:
            try:
                a, b, w = spec.split(",")
                hot.append((int(a) - 1, int(b) - 1, float(w)))
            except ValueError:
                raise ValueError(f"bad --hot-pair {spec!r}; expected A,B,W") from None
        changes["hot_pairs"] = tuple(hot)
    return replace(base, **changes)


def _load_trace(args) -> Trace:
    if args.trace is not None:
        with open(args.trace, encoding="utf-8") as fh:
            return parse_trace(fh)
    return generate_synthetic(_workload(args))


def _emit(text: str, out: Optional[Path]):
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")


def _source_line(args) -> str:
    if args.trace is not None:
        return f"# trace={args.trace}\n"
    return f"# seed={args.seed}\n"


def cmd_simulate(args) -> int:
    params = _params(args)
    trace = _load_trace(args)
    report = run_trace(trace, params, args.mode)
    text = _source_line(args) + report.summary() + "\n"
    sys.stdout.write(text)
    if args.out is not None:
        row = {"mode": report.mode, "seed": args.seed, **report.as_row()}
        args.out.write_text(reports_to_csv([row]), encoding="utf-8")
    return EXIT_OK


def cmd_sweep(args) -> int:
    trace = None
    if args.trace is not None:
        with open(args.trace, encoding="utf-8") as fh:
            trace = parse_trace(fh)
    spec = SweepSpec(
        param=args.param,
        values=args.values,
        params=_params(args),
        workload=_workload(args),
        trace=trace,
        couple=fixed_sum(args.rho_sum) if args.param == "rho" else None,
    )
    rows = sweep(spec, jobs=args.jobs)
    text = _source_line(args) + reports_to_csv(rows, SWEEP_HEADER)
    _emit(text, args.out)
    if args.plot:
        target = args.out.with_suffix(".svg") if args.out else Path(f"sweep_{args.param}.svg")
        plot_sweep(rows, target)
        print(f"plot written to {target}", file=sys.stderr)
    return EXIT_OK


def cmd_compare(args) -> int:
    params = _params(args)
    trace = _load_trace(args)
    result = compare(trace, params, budget=args.budget)
    lines = [_source_line(args).rstrip("\n")]
    for key in ("engine_proof", "proof_opt", "proof_ratio", "bound", "engine_total", "dp_opt", "total_ratio"):
        value = result[key]
        lines.append(f"{key:>13}: {'skipped' if value is None else repr(value)}")
    if "dp_notice" in result:
        lines.append(f"notice: total-mode oracle skipped ({result['dp_notice']})")
    print("\n".join(lines))
    return EXIT_OK


def cmd_oracle(args) -> int:
    params = _params(args)
    trace = _load_trace(args)
    freq = offline_frequent_pairs(trace, params.gamma)
    print(_source_line(args).rstrip("\n"))
    print(f"frequent_pairs: {' '.join(f'{a + 1},{b + 1}' for a, b in freq) or '-'}")
    print(f"proof_opt: {proof_mode_opt(trace, params, freq)!r}")
    try:
        dp = dp_total_opt(trace, params, freq, budget=args.budget)
    except OracleBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    print(f"dp_opt: {dp!r}")
    return EXIT_OK


def cmd_generate(args) -> int:
    if args.adversarial:
        params = _params(args)
        gap = args.gap if args.gap is not None else 2 * params.delta_t
        trace = generate_adversarial(AdversaryConfig(rounds=args.rounds, gap=gap), params)
        header = f"# adversarial rounds={args.rounds} gap={gap!r}\n"
    else:
        trace = generate_synthetic(_workload(args))
        header = f"# seed={args.seed}\n"
    _emit(header + write_trace(trace), args.out)
    return EXIT_OK


def cmd_pricing(args) -> int:
    params = _params(args)
    trace = _load_trace(args)
    pricing = PricingConfig(args.cache_price, args.transfer_price, args.gb_per_item, args.period)
    packed = run_trace(trace, params, Mode.PACKED)
    individual = run_trace(trace, params, Mode.INDIVIDUAL)
    proj = pricing_projection(packed, individual, pricing)
    print(_source_line(args).rstrip("\n"))
    print(f"packed_spend: {proj.packed_spend:.4f}")
    print(f"individual_spend: {proj.individual_spend:.4f}")
    print(f"saving: {proj.saving:.4f} ({100 * proj.relative_saving:.2f}%)")
    print(f"gb_avoided: {proj.gb_avoided:.4f}")
    return EXIT_OK


COMMANDS = {
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "compare": cmd_compare,
    "oracle": cmd_oracle,
    "generate": cmd_generate,
    "pricing": cmd_pricing,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except OracleBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ParamError, TraceError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
