import pytest
from hypothesis import given
from hypothesis import strategies as st

from packcache.model import (CostParams, ParamError, Request, Trace, TraceError,
                             derive_delta_t, validate_params)


@pytest.mark.parametrize("mu, lam, expected", [(3, 3, 1), (1, 1, 1), (2, 4, 2)])
def test_delta_t(mu, lam, expected):
    assert derive_delta_t(CostParams(mu=mu, lam=lam)) == expected


def test_default_params_are_valid():
    p = validate_params(3, 3, 0.8, 0.01)
    assert (p.mu, p.lam, p.alpha, p.gamma) == (3, 3, 0.8, 0.01)
    assert CostParams() == p


@pytest.mark.parametrize("raw, fragment", [
    ((3, 3, 0, 0.01), "alpha must be in (0,1]"),
    ((3, 3, 1.5, 0.01), "alpha"),
    ((3, -1, 0.8, 0.01), "lambda"),
    ((0, 3, 0.8, 0.01), "mu"),
    ((3, 3, 0.8, 0), "gamma"),
    ((3, 3, 0.8, 1.01), "gamma"),
    ((float("nan"), 3, 0.8, 0.1), "mu"),
])
def test_validate_rejects(raw, fragment):
    with pytest.raises(ParamError, match=fragment.replace("(", r"\(").replace(")", r"\)").replace("]", r"\]")):
        validate_params(*raw)


@given(st.floats(1e-3, 1e3), st.floats(1e-3, 1e3))
def test_break_even_identity(mu, lam):
    p = CostParams(mu=mu, lam=lam)
    assert p.delta_t * p.mu == pytest.approx(p.lam, rel=1e-12)


def test_request_normalizes_items():
    assert Request(1.0, 0, (3, 1)).items == (1, 3)
    with pytest.raises(TraceError, match="not distinct"):
        Request(1.0, 0, (2, 2))
    with pytest.raises(TraceError):
        Request(1.0, 0, ())
    with pytest.raises(TraceError):
        Request(-1.0, 0, (0,))


def test_trace_rejects_non_increasing_times():
    with pytest.raises(TraceError, match="duplicate"):
        Trace(2, 2, (Request(1.0, 0, (0,)), Request(1.0, 1, (1,))))
    with pytest.raises(TraceError, match="increasing"):
        Trace(2, 2, (Request(2.0, 0, (0,)), Request(1.0, 1, (1,))))


def test_trace_rejects_out_of_range_ids():
    with pytest.raises(TraceError, match="server"):
        Trace(2, 2, (Request(1.0, 2, (0,)),))
    with pytest.raises(TraceError, match="item"):
        Trace(2, 2, (Request(1.0, 0, (2,)),))
    with pytest.raises(TraceError):
        Trace(2, 1, ())
