"""Instability certificate: closed-form pieces, quadrature cross-checks,
wire schema, and determinism."""

import json

import numpy as np
import pytest

from boltlab.certificate import (
    antiderivative,
    build_cutoff,
    certificate_wire,
    certify_instability,
    closed_form_bracket,
    corrected_form_value,
    displayed_integrand,
)
from boltlab.profile import BoltProfile


def test_bracket_pieces():
    from boltlab.certificate import _pieces
    pieces = _pieces()
    assert pieces["inner"] == pytest.approx(-61.4909, abs=1e-3)
    assert pieces["kink"] == pytest.approx(28.5872, abs=1e-3)
    assert pieces["tail_bound"] == pytest.approx(29.2736, abs=1e-3)
    assert closed_form_bracket() == pytest.approx(-3.6301, abs=1e-3)


def test_bracket_within_published_tolerance():
    assert closed_form_bracket() == pytest.approx(-3.63, abs=0.05)


def test_antiderivative_is_exact():
    r = np.linspace(0.1, 10.0, 200)
    h = 1e-5
    fd = (antiderivative(r + h) - antiderivative(r - h)) / (2.0 * h)
    assert fd == pytest.approx(displayed_integrand(r), rel=1e-6, abs=1e-8)


def test_inner_piece_three_routes():
    cert = certify_instability()
    vals = cert.values
    assert vals["inner_antiderivative"] == pytest.approx(
        vals["pieces"][0], rel=1e-12)
    assert vals["inner_adaptive"] == pytest.approx(
        vals["inner_antiderivative"], rel=1e-10)
    assert vals["inner_simpson"] == pytest.approx(
        vals["inner_antiderivative"], rel=1e-9)


def test_quadrature_value():
    """Sharp-tail quadrature of the displayed integrand: a derived
    regression value near -30.06, negative and below the bracket."""
    cert = certify_instability()
    quad = cert.values["bracket_quadrature"]
    assert quad == pytest.approx(-30.06, abs=0.1)
    assert quad < 0.0
    assert quad <= cert.values["bracket_paper"]
    assert cert.verdict == "PASS"


def test_corrected_form_value_positive():
    """With the frame calculus the same witness gives a positive form
    value (about +110 in bracket units); both conventions are reported."""
    val = corrected_form_value(BoltProfile(1.0))
    assert val == pytest.approx(110.03, abs=0.05)
    cert = certify_instability()
    assert cert.values["corrected_form_value"] == pytest.approx(val, rel=1e-10)


def test_cutoff_continuity():
    eta = build_cutoff(np.array([2.999999, 3.0, 3.000001]))
    assert eta[0] == pytest.approx(1.0)
    assert eta[1] == pytest.approx(np.exp(0.75 - 0.75), rel=1e-12)
    assert np.all(np.diff(eta) <= 0.0)


def test_wire_schema():
    cert = certify_instability()
    doc = json.loads(certificate_wire(cert, timestamp=False))
    assert set(doc) == {"name", "pieces", "bracket_paper",
                        "bracket_quadrature", "checks", "verdict",
                        "metadata", "values"}
    assert doc["verdict"] == "PASS"
    assert len(doc["pieces"]) == 3
    assert all({"name", "value", "passed"} <= set(c) for c in doc["checks"])


def test_determinism():
    a = certificate_wire(certify_instability(), timestamp=False)
    b = certificate_wire(certify_instability(), timestamp=False)
    assert a == b
    stamped = certificate_wire(certify_instability(), timestamp=True)
    assert "timestamp" in json.loads(stamped)["metadata"]


def test_zero_field_debug():
    cert = certify_instability(scheme="zero_field_debug")
    assert cert.verdict == "FAIL"
    doc = json.loads(certificate_wire(cert, timestamp=False))
    assert doc["bracket_quadrature"] == 0.0


def test_quadrature_only_mode():
    cert = certify_instability(scheme="quadrature_only")
    names = {c.name for c in cert.checks}
    assert "bracket_value" not in names
    assert cert.values["bracket_quadrature"] < 0.0
    assert cert.verdict == "PASS"
