"""Closed-form profile: values, identities, derivatives, scaling."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boltlab.frame_geometry import bolt_metric_pairs, christoffels_full
from boltlab.profile import BoltProfile

RADII = st.floats(min_value=1e-3, max_value=1e3)
SCALES = st.floats(min_value=0.1, max_value=10.0)


def test_values_at_one():
    p = BoltProfile(1.0)
    assert p.a(1.0) == pytest.approx(3.2, rel=1e-15)
    assert p.b(1.0) == pytest.approx(32.0, rel=1e-15)
    assert p.c(1.0) == pytest.approx(5.0, rel=1e-15)


def test_bolt_values():
    p = BoltProfile(1.0)
    assert p.b(0.0) == pytest.approx(12.0)
    assert p.c(0.0) == 0.0
    p2 = BoltProfile(2.0)
    assert p2.b(0.0) == pytest.approx(12.0 * 4.0)  # b(0) = 12 n^2


@given(r=RADII, n=SCALES)
def test_ac_identity(r, n):
    p = BoltProfile(n)
    assert p.a(r) * p.c(r) == pytest.approx(16.0 * n * n, rel=1e-12)


@given(r=RADII)
@settings(max_examples=40)
def test_derivatives_match_finite_differences(r):
    p = BoltProfile(1.0)
    h = 1e-5 * r  # relative step: the profile varies on scale r at the bolt
    for f, df in ((p.a, p.da), (p.b, p.db), (p.c, p.dc)):
        fd = (f(r + h) - f(r - h)) / (2.0 * h)
        assert df(r) == pytest.approx(fd, rel=1e-6, abs=1e-10)
    for df, d2f in ((p.db, p.d2b), (p.dc, p.d2c), (p.da, p.d2a)):
        fd = (df(r + h) - df(r - h)) / (2.0 * h)
        assert d2f(r) == pytest.approx(fd, rel=1e-5, abs=1e-9)


def test_monotone_profiles():
    p = BoltProfile(1.0)
    r = np.linspace(0.0, 500.0, 5000)
    assert np.all(p.db(r) >= 0.0)
    assert np.all(p.dc(r) >= 0.0)


def test_fiber_ratio_reference_point():
    p = BoltProfile(1.0)
    rbar = p.fiber_ratio_maximizer()
    assert 5.0 / 8.0 < rbar < 6.0 / 8.0
    assert rbar == pytest.approx(0.6254899, abs=1e-6)
    assert p.fiber_ratio(rbar) == pytest.approx(0.6124877, abs=1e-6)


def test_fiber_ratio_true_maximum():
    """The displayed rational's actual maximum (distinct from the quoted
    critical point, see fiber_ratio_maximizer) stays below the bound."""
    p = BoltProfile(1.0)
    r = np.linspace(0.0, 10.0, 200001)
    u = p.fiber_ratio(r)
    i = int(np.argmax(u))
    assert r[i] == pytest.approx(0.8517081, abs=1e-4)
    assert u[i] == pytest.approx(0.6300027, abs=1e-6)
    assert u[i] <= 110592.0 / 142129.0


@given(r=RADII, n=SCALES)
@settings(max_examples=40)
def test_scaling_covariance(r, n):
    """g_n(n r) is n^2 times g_1(r) orbit-wise, with a scale invariant."""
    p1, pn = BoltProfile(1.0), BoltProfile(n)
    assert pn.a(n * r) == pytest.approx(p1.a(r), rel=1e-12)
    assert pn.b(n * r) == pytest.approx(n * n * p1.b(r), rel=1e-12)
    assert pn.c(n * r) == pytest.approx(n * n * p1.c(r), rel=1e-12)


def test_invalid_scale_rejected():
    with pytest.raises(ValueError):
        BoltProfile(0.0)
    with pytest.raises(ValueError):
        BoltProfile(-1.0)


def test_christoffels_match_koszul_oracle():
    p = BoltProfile(1.0)
    pairs = bolt_metric_pairs(p)
    names = ("r", "1", "2", "3")
    for r in (0.3, 1.0, 4.7):
        G = christoffels_full(pairs, r)
        table = p.christoffels(r)
        for l in range(4):
            for i in range(4):
                for j in range(4):
                    expected = table.get((names[l], names[i], names[j]), 0.0)
                    assert G[l, i, j] == pytest.approx(expected, abs=1e-12)


def test_christoffels_reject_bolt():
    with pytest.raises(ValueError):
        BoltProfile(1.0).christoffels(0.0)
