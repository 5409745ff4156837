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
# # Serving a handful of requests by hand
#
# All items start on server 1. A copy lives for `delta_t = lambda / mu` after
# its last use; the last copy of an item is never dropped.

# %%
from packcache import CostParams, PackCacheEngine, Request
from packcache.fpm import FrequentSet

params = CostParams(mu=3, lam=3, alpha=0.8, gamma=0.01)
engine = PackCacheEngine(k=2, m=3, params=params)
print("delta_t =", params.delta_t)
print("E =", engine.state.E, "c =", engine.state.c)

# %% [markdown]
# A request for item 1 at server 2 at t=5 has to be served by a transfer.
# The origin copy was kept alive as the only copy until then.

# %%
engine.advance(5.0, inclusive=False)
print(engine.arrive(Request(5.0, 1, (0,))))
print("E[item 1] =", engine.state.E[0], "c =", engine.state.c)

# %% [markdown]
# Half a time unit later the copy is still there: a local hit.

# %%
engine.advance(5.5, inclusive=False)
print(engine.arrive(Request(5.5, 1, (0,))))
print("origin copy of item 1 after its expiration:", engine.state.E[0][0])

# %% [markdown]
# A pair request with both items missing is packed only if the pair is
# currently frequent and one server holds both.

# %%
fresh = PackCacheEngine(k=2, m=3, params=params)
frequent = FrequentSet(frozenset({(0, 1)}), 1)
print("frequent:", fresh.handle_request(Request(0.5, 2, (0, 1)), freq=frequent))
fresh = PackCacheEngine(k=2, m=3, params=params)
print("not frequent:", fresh.handle_request(Request(0.5, 2, (0, 1))))
