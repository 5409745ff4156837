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
# # Parameter sweeps on the synthetic pair-heavy workload
#
# 5000 requests over 10 items and 50 servers, 80% of them pair requests,
# with five hot pairs of decreasing popularity.

# %%
import matplotlib.pyplot as plt
import pandas as pd

from packcache import CostParams, pair_heavy_config
from packcache.bench import SweepSpec, sweep

workload = pair_heavy_config()
params = CostParams()


def table(param, values):
    df = pd.DataFrame(sweep(SweepSpec(param, values, params=params, workload=workload), jobs=4))
    return df.pivot(index="value", columns="mode", values="avg_transfer")


# %% [markdown]
# ## rho = lambda / mu with lambda + mu = 6

# %%
rho = table("rho", [0.2, 0.5, 1, 2, 5])
rho["reduction %"] = 100 * (1 - rho["packed"] / rho["individual"])
rho

# %% [markdown]
# ## Minimum support

# %%
gamma = table("gamma", [0.005, 0.01, 0.05, 0.1])
gamma["gap"] = gamma["individual"] - gamma["packed"]
gamma

# %% [markdown]
# ## Discount factor: packed cost is a straight line in alpha

# %%
alpha = table("alpha", [0.6, 0.7, 0.8, 0.9, 1.0])
ax = alpha.plot(marker="o")
ax.set_ylabel("avg transfer cost")
plt.show()

# %% [markdown]
# ## Servers and items

# %%
table("servers", [10, 30, 50])

# %%
table("items", [2, 5, 10])
