import random
import sys

import pytest

from packcache.model import Request, Trace


def random_trace(rng: random.Random, k_max=5, m_max=5, n_max=200, pair_prob=0.5, max_gap=3.0):
    k = rng.randint(1, k_max)
    m = rng.randint(2, m_max)
    n = rng.randint(0, n_max)
    t = 0.0
    reqs = []
    for _ in range(n):
        t += rng.uniform(0.01, max_gap)
        server = rng.randrange(m)
        if k >= 2 and rng.random() < pair_prob:
            items = tuple(rng.sample(range(k), 2))
        else:
            items = (rng.randrange(k),)
        reqs.append(Request(t, server, items))
    return Trace(k, m, tuple(reqs))


@pytest.fixture
def rng():
    return random.Random(1234)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "VERDICTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda l: int(l.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
