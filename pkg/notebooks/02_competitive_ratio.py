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
# # The 2/alpha bound, from both sides
#
# The proof-mode ledger charges each request its transfers plus the retention
# window it opens. Against the per-request offline optimum this ratio never
# exceeds `2 / alpha`, and a single pair request at a fresh server hits it.

# %%
import random

from packcache import (AdversaryConfig, CostParams, Request, Trace, generate_adversarial,
                       offline_frequent_pairs, proof_mode_opt, run_trace)

for alpha in (0.6, 0.8, 1.0):
    p = CostParams(1, 1, alpha, 0.01)
    t = generate_adversarial(AdversaryConfig(rounds=1), p)
    ratio = run_trace(t, p).proof_cost / proof_mode_opt(t, p, offline_frequent_pairs(t, p.gamma))
    print(f"alpha={alpha}: ratio {ratio:.4f}, bound {2 / alpha:.4f}")

# %% [markdown]
# More rounds: after the first, the pair is frequent online and later rounds
# are packed, so each costs `2 alpha + 2` against `2 alpha`.

# %%
p = CostParams(1, 1, 0.8, 0.01)
for rounds in (1, 2, 5, 20):
    t = generate_adversarial(AdversaryConfig(rounds=rounds, gap=1.5), p)
    r = run_trace(t, p)
    print(rounds, round(r.proof_cost / proof_mode_opt(t, p, offline_frequent_pairs(t, p.gamma)), 4))

# %% [markdown]
# Random traces stay under the bound.

# %%
rng = random.Random(0)
worst = 0.0
for _ in range(300):
    k, m = rng.randint(2, 5), rng.randint(2, 5)
    now, reqs = 0.0, []
    for _ in range(rng.randint(1, 100)):
        now += rng.uniform(0.05, 3)
        items = tuple(rng.sample(range(k), rng.choice([1, 2])))
        reqs.append(Request(now, rng.randrange(m), items))
    t = Trace(k, m, tuple(reqs))
    ratio = run_trace(t, p).proof_cost / proof_mode_opt(t, p, offline_frequent_pairs(t, p.gamma))
    worst = max(worst, ratio)
print(f"worst ratio {worst:.4f} <= {2 / p.alpha}")

# %% [markdown]
# On tiny traces the exact offline optimum over standard-form schedules is
# also available; it prices every copy-second.

# %%
from packcache import dp_total_opt

t = generate_adversarial(AdversaryConfig(rounds=3, gap=1.5), p)
freq = offline_frequent_pairs(t, p.gamma)
print("engine total", run_trace(t, p).total_cost, "dp optimum", dp_total_opt(t, p, freq))
