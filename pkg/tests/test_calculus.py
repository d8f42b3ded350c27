"""Covariant calculus: gradient components, the exact factor-4 relation to
the quoted closed form, the curvature pairing, and the quadratic form."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boltlab.calculus import (
    covariant_gradient,
    curvature_pairing,
    grad_norm_sq,
    lichnerowicz,
    norms,
    quadratic_form_a,
)
from boltlab.curvature import shared_sectional
from boltlab.fields import DiagonalTensorField, witness_field
from boltlab.profile import BoltProfile

PROFILE = BoltProfile(1.0)
WITNESS_TAIL = (2e4, 2.0, 0.5)


def constant_field(hr, h1, h3):
    zero = (lambda r: np.zeros_like(np.asarray(r, dtype=float)),) * 3
    return DiagonalTensorField(
        funcs=(lambda r: np.full_like(np.asarray(r, float), hr),
               lambda r: np.full_like(np.asarray(r, float), h1),
               lambda r: np.full_like(np.asarray(r, float), h3)),
        dfuncs=zero, d2funcs=zero)


def quoted_closed_form(r):
    """(b')^2/(a b^2) + 4 c/b^2 for the direction (1, -1, -1, 1)."""
    v = PROFILE.eval(np.asarray(r, dtype=float))
    return v.db ** 2 / (v.a * v.b ** 2) + 4.0 * v.c / v.b ** 2


def test_metric_direction_is_parallel():
    g = constant_field(1.0, 1.0, 1.0)
    grad = covariant_gradient(g, PROFILE, 1.3)
    assert all(abs(v) < 1e-14 for v in grad.values())
    assert grad_norm_sq(g, PROFILE, 1.3) == pytest.approx(0.0, abs=1e-14)


def test_gradient_component_pattern():
    h = constant_field(1.0, -1.0, 1.0)
    grad = covariant_gradient(h, PROFILE, 1.0)
    # radial derivatives vanish for a constant-direction field
    assert grad[("r", "r", "r")] == 0.0
    # connection terms: beta (h_r - h_1), gamma (h_r - h_3), tau (h_1 - h_3)
    v = PROFILE.eval(1.0)
    beta = v.db / (2.0 * v.b * np.sqrt(v.a))
    tau = np.sqrt(v.c) / v.b
    assert grad[("1", "1", "r")] == pytest.approx(2.0 * beta, rel=1e-13)
    assert grad[("3", "3", "r")] == pytest.approx(0.0, abs=1e-14)
    assert grad[("1", "2", "3")] == pytest.approx(-2.0 * tau, rel=1e-13)
    # antisymmetry of the torsion-generated pair
    assert grad[("2", "1", "3")] == pytest.approx(-grad[("1", "2", "3")])


@given(r=st.floats(min_value=1e-2, max_value=50.0))
@settings(max_examples=60)
def test_factor_four_relation(r):
    """The frame calculus gives exactly 4 times the quoted closed form for
    the direction (1, -1, -1, 1); the factor is an exact rational identity
    (at r = 1 the two values are 400/512 and 100/512)."""
    h = constant_field(1.0, -1.0, 1.0)
    assert grad_norm_sq(h, PROFILE, r) == pytest.approx(
        4.0 * quoted_closed_form(r), rel=1e-12)


def test_values_at_one():
    h = constant_field(1.0, -1.0, 1.0)
    assert grad_norm_sq(h, PROFILE, 1.0) == pytest.approx(400.0 / 512.0, rel=1e-13)
    assert quoted_closed_form(1.0) == pytest.approx(100.0 / 512.0, rel=1e-13)


def test_pairing_on_witness_direction():
    h = constant_field(1.0, -1.0, 1.0)
    r = np.geomspace(1e-2, 1e2, 50)
    assert curvature_pairing(h, PROFILE, r) == pytest.approx(
        16.0 * shared_sectional(PROFILE, r), rel=1e-13)


def test_pairing_vanishes_on_pure_trace():
    g = constant_field(1.0, 1.0, 1.0)
    assert np.max(np.abs(curvature_pairing(g, PROFILE,
                                           np.geomspace(0.1, 10, 20)))) < 1e-14


@given(scale=st.floats(min_value=0.1, max_value=10.0))
@settings(max_examples=10, deadline=None)
def test_form_is_quadratic(scale):
    h = witness_field(PROFILE)
    scaled = DiagonalTensorField(
        funcs=tuple((lambda f: (lambda r: scale * f(r)))(f) for f in h.funcs),
        dfuncs=tuple((lambda f: (lambda r: scale * f(r)))(f) for f in h.dfuncs))
    a1 = quadratic_form_a(h, PROFILE, r_max=60.0, breakpoints=(3.0,)).value
    a2 = quadratic_form_a(scaled, PROFILE, r_max=60.0, breakpoints=(3.0,)).value
    assert a2 == pytest.approx(scale * scale * a1, rel=1e-9)


def test_witness_form_value_and_norm():
    """Derived regression values of the frame calculus on the witness:
    a(h-bar) = 440.125 (positive) and the exact ||h-bar||_2^2 = 8960."""
    h = witness_field(PROFILE)
    a_val = quadratic_form_a(h, PROFILE, r_max=200.0, breakpoints=(3.0,),
                             tail_envelope=WITNESS_TAIL)
    assert a_val.value == pytest.approx(440.1254, abs=1e-3)
    l2, h1n = norms(h, PROFILE, breakpoints=(3.0,), tail_envelope=WITNESS_TAIL)
    assert l2 ** 2 == pytest.approx(8960.0, rel=1e-10)
    assert h1n > l2 / 10.0  # sanity: the H^1 norm is a norm


def test_lichnerowicz_green_identity():
    """integral <Lich h, h> nu dr = -a(h) for a smooth decaying field."""
    def f(r):
        return np.exp(-0.5 * r) * (1.0 + r)

    def df(r):
        return np.exp(-0.5 * r) * (0.5 - 0.5 * r)

    def d2f(r):
        return np.exp(-0.5 * r) * (-0.75 + 0.25 * r)

    h = DiagonalTensorField(
        funcs=(f, lambda r: -f(r), f),
        dfuncs=(df, lambda r: -df(r), df),
        d2funcs=(d2f, lambda r: -d2f(r), d2f))
    a_val = quadratic_form_a(h, PROFILE, r_max=120.0).value

    from boltlab.quadrature import integrate

    def pairing(r):
        L = lichnerowicz(h, PROFILE, np.asarray(r, dtype=float))
        c = h.components(np.asarray(r, dtype=float))
        nu = 4.0 * PROFILE.b(r)
        return float(np.sum(np.array([1.0, 2.0, 1.0]) * L * c) * nu)

    lhs = integrate(pairing, r_max=120.0).value
    assert lhs == pytest.approx(-a_val, rel=1e-7)


def test_gradient_rejects_bolt():
    h = constant_field(1.0, -1.0, 1.0)
    with pytest.raises(ValueError):
        covariant_gradient(h, PROFILE, 0.0)
