import math

import pytest
from hypothesis import given, strategies as st

from slchaos.dynamics import SystemParams
from slchaos.timegauge import (
    Gauge,
    lambda_coeff,
    make_gauged_field,
    msl_rhs,
    scale_time,
    unscale_time,
)

G = Gauge(0.9, 2.0 / 3.0)


def test_lambda_examples():
    assert lambda_coeff(0.9, 2.0 / 3.0) == pytest.approx(0.3, rel=1e-15)
    assert lambda_coeff(1.8, 0.5) == pytest.approx(0.9, rel=1e-15)


@pytest.mark.parametrize("mu,D", [(0.0, 0.5), (-1.0, 0.5), (math.inf, 0.5), (0.9, 0.0), (0.9, 1.0), (0.9, -0.2), (0.9, 1.5), (0.9, math.nan)])
def test_gauge_boundaries_rejected(mu, D):
    with pytest.raises(ValueError):
        lambda_coeff(mu, D)
    with pytest.raises(ValueError):
        Gauge(mu, D)


def test_gauge_lam_is_derived():
    g = Gauge(1.8, 0.5)
    assert g.lam == lambda_coeff(1.8, 0.5)
    # frozen: no way to desynchronize lam from (mu, D)
    with pytest.raises(AttributeError):
        g.lam = 5.0  # type: ignore[misc]


def test_scale_time_values():
    assert scale_time(G, 0.0) == 0.0
    assert scale_time(G, 1.0) == 0.9
    # 0.9 * 0.1**(1/3), frozen from the arithmetic
    assert scale_time(G, 0.1) == pytest.approx(0.41774299502515, rel=1e-12)
    assert scale_time(G, 1e6) == pytest.approx(90.0, rel=1e-12)


def test_scale_time_rejects_negative():
    with pytest.raises(ValueError):
        scale_time(G, -0.5)
    with pytest.raises(ValueError):
        scale_time(G, math.inf)


def test_unscale_time_inverts():
    assert unscale_time(G, 0.0) == 0.0
    assert unscale_time(G, 0.9) == pytest.approx(1.0, rel=1e-12)
    assert unscale_time(G, 90.0) == pytest.approx(1e6, rel=1e-12)
    with pytest.raises(ValueError):
        unscale_time(G, -1.0)


@given(t=st.floats(1e-3, 1e9))
def test_scale_round_trip(t):
    assert unscale_time(G, scale_time(G, t)) == pytest.approx(t, rel=1e-12)


@given(D=st.floats(0.05, 0.95), mu=st.floats(0.1, 10.0), t=st.floats(1e-2, 1e6))
def test_scale_monotone_in_t(D, mu, t):
    g = Gauge(mu, D)
    assert scale_time(g, t * 1.5) > scale_time(g, t)


def test_msl_rhs_composition():
    # weight at t=1 is lam; f(0, 1, 0) = (a, -1, 0)
    p = SystemParams(2.0, 0.3, 27.0)
    f = msl_rhs(p, G, 1.0, (0.0, 1.0, 0.0))
    assert f.x == pytest.approx(2.0 * G.lam, rel=1e-15)
    assert f.y == pytest.approx(-G.lam, rel=1e-15)
    assert f.z == 0.0


def test_msl_rhs_singular_at_zero():
    p = SystemParams(2.0, 0.3, 27.0)
    with pytest.raises(ValueError):
        msl_rhs(p, G, 0.0, (1.0, 1.0, 1.0))
    with pytest.raises(ValueError):
        msl_rhs(p, G, -2.0, (1.0, 1.0, 1.0))


def test_msl_rhs_origin_is_gauge_invariant():
    p = SystemParams(2.0, 0.3, 27.0)
    f = msl_rhs(p, G, 17.3, (0.0, 0.0, 0.0))
    assert tuple(f) == (0.0, 0.0, 0.0)


def test_msl_rhs_linear_in_lambda():
    # doubling mu doubles lam and hence the whole right-hand side
    p = SystemParams(2.0, 0.3, 27.0)
    g2 = Gauge(1.8, 2.0 / 3.0)
    f1 = msl_rhs(p, G, 3.7, (1.0, -2.0, 0.5))
    f2 = msl_rhs(p, g2, 3.7, (1.0, -2.0, 0.5))
    assert f2.x == pytest.approx(2 * f1.x, rel=1e-14)
    assert f2.y == pytest.approx(2 * f1.y, rel=1e-14)
    assert f2.z == pytest.approx(2 * f1.z, rel=1e-14)


def test_gauged_closure_matches_msl_rhs():
    p = SystemParams(2.0, 0.3, 27.0)
    rhs = make_gauged_field(p, G)
    got = rhs(5.0, (0.4, 0.6, -1.0))
    want = msl_rhs(p, G, 5.0, (0.4, 0.6, -1.0))
    assert got == pytest.approx(tuple(want), rel=1e-15)
    with pytest.raises(ValueError):
        rhs(0.0, (1.0, 1.0, 1.0))
