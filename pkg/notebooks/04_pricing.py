# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#   kernelspec:
#     display_name: Python 3
#     language: python
#     name: python3
# ---

# %% [markdown]
# # Projecting both modes onto real prices
#
# $0.04 per GB held per period and $0.08 per GB transferred. One time unit of
# the simulation is one period here; each item is 1 GB.

# %%
from packcache import (CostParams, Mode, PricingConfig, generate_synthetic,
                       pair_heavy_config, pricing_projection, run_trace)

trace = generate_synthetic(pair_heavy_config(n=1000))
pricing = PricingConfig(cache_price=0.04, transfer_price=0.08, gb_per_item=1.0, period=1.0)

for alpha in (0.6, 0.8):
    p = CostParams(alpha=alpha)
    proj = pricing_projection(run_trace(trace, p, Mode.PACKED), run_trace(trace, p, Mode.INDIVIDUAL), pricing)
    print(f"alpha={alpha}: spend {proj.packed_spend:.2f} vs {proj.individual_spend:.2f}, "
          f"saving {proj.saving:.2f} ({100 * proj.relative_saving:.2f}%), {proj.gb_avoided:.1f} GB avoided")
