"""Trace-driven simulator for online packable data caching."""

from .accounting import CostReport, PricingConfig, pricing_projection, proof_mode_cost
from .engine import Mode, PackCacheEngine, run_trace
from .fpm import FpTree, FrequentSet, mine_frequent_pairs, naive_frequent_pairs
from .model import CostParams, ParamError, Request, Trace, TraceError, validate_params
from .oracle import dp_total_opt, offline_frequent_pairs, proof_mode_opt
from .trace import (AdversaryConfig, SyntheticConfig, generate_adversarial,
                    generate_synthetic, pair_heavy_config, parse_trace, write_trace)

__version__ = "0.1.0"

__all__ = [
    "AdversaryConfig", "CostParams", "CostReport", "FpTree", "FrequentSet", "Mode",
    "PackCacheEngine", "ParamError", "PricingConfig", "Request", "SyntheticConfig",
    "Trace", "TraceError", "dp_total_opt", "generate_adversarial", "generate_synthetic",
    "mine_frequent_pairs", "naive_frequent_pairs", "offline_frequent_pairs",
    "pair_heavy_config", "parse_trace", "pricing_projection", "proof_mode_cost",
    "proof_mode_opt", "run_trace", "validate_params", "write_trace",
]
