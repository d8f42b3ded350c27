"""Acceptance gate: one test per primary criterion, each printing a single
PASS/FAIL line with its runtime and enforcing the stated tolerance and
budget.  Run with -s (or read captured output) for the lines; the test
verdicts themselves mirror them one-to-one."""

import time

import numpy as np
import pytest

from boltlab.calculus import grad_norm_sq, norms, quadratic_form_a
from boltlab.certificate import certify_instability
from boltlab.curvature import certify_profile_bounds, curvature
from boltlab.fields import DiagonalTensorField, witness_field
from boltlab.flow import FlowConfig, FlowModel, ancient_family, run
from boltlab.profile import BoltProfile
from boltlab.spectral import assemble, frequency_diagnostics, solve

PROFILE = BoltProfile(1.0)
LAMBDA_REF = 0.2009327  # derived regression constant


class _Timer:
    def __init__(self, name, budget):
        self.name, self.budget = name, budget

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        verdict = "PASS" if exc_type is None else "FAIL"
        print(f"{verdict:4s}  {self.name}  ({elapsed:.2f}s, "
              f"budget {self.budget:.0f}s)")
        assert elapsed < self.budget, f"{self.name}: runtime budget exceeded"
        return False


@pytest.fixture(scope="module")
def flow_model_1024():
    return FlowModel(PROFILE, 1024)


def test_ricci_flatness():
    with _Timer("ricci-flatness |Ric|/|Rm| < 1e-10", 1.0):
        r = np.geomspace(1e-3, 1e3, 10_000)
        t = curvature(PROFILE, r)
        assert np.max(t.abs_Ric / t.abs_Rm) < 1e-10


def test_profile_certificate():
    with _Timer("profile bounds: monotone r^3|Rm| tail, b',c' >= 0, max u", 1.0):
        cert = certify_profile_bounds(PROFILE)
        assert cert.verdict == "PASS"
        assert cert.values["max_u"] == pytest.approx(0.6125, abs=1e-3)
        assert cert.values["max_u"] <= 110592.0 / 142129.0
        assert 5.0 / 8.0 < cert.values["rbar"] < 6.0 / 8.0
        assert cert.values["min_db"] >= 0.0
        assert cert.values["min_dc"] >= 0.0


def test_instability_bracket():
    with _Timer("instability bracket -3.63 +- 0.05 and quadrature", 5.0):
        cert = certify_instability()
        bracket = cert.values["bracket_paper"]
        assert bracket == pytest.approx(-3.63, abs=0.05)
        rel = abs(cert.values["inner_adaptive"]
                  - cert.values["inner_antiderivative"]) \
            / abs(cert.values["inner_antiderivative"])
        assert rel <= 1e-8
        quad = cert.values["bracket_quadrature"]
        assert quad < 0.0
        assert quad <= bracket + 1e-9


@pytest.mark.xfail(
    strict=True,
    reason="the quoted closed form is exactly 1/4 of the frame-calculus "
    "|grad h|^2 assembled from the connection table (the quoted per-"
    "component gradients are -1/2 of the Christoffel contraction); the "
    "criterion is kept verbatim as an honest red, and the exact relation "
    "C = 4A is verified to 1e-12 in test_calculus.py::test_factor_four_relation")
def test_grad_norm_matches_quoted_closed_form():
    with _Timer("|grad h|^2 equals quoted closed form to 1e-8", 1.0):
        rng = np.random.default_rng(0)
        r = rng.uniform(1e-2, 50.0, 1000)
        zero = (lambda rr: np.zeros_like(np.asarray(rr, float)),) * 3
        h = DiagonalTensorField(
            funcs=(lambda rr: np.ones_like(np.asarray(rr, float)),
                   lambda rr: -np.ones_like(np.asarray(rr, float)),
                   lambda rr: np.ones_like(np.asarray(rr, float))),
            dfuncs=zero)
        v = PROFILE.eval(r)
        closed = v.db ** 2 / (v.a * v.b ** 2) + 4.0 * v.c / v.b ** 2
        ours = grad_norm_sq(h, PROFILE, r)
        assert np.max(np.abs(ours - closed) / closed) < 1e-8


def test_spectral_eigenvalue():
    with _Timer("spectral lambda > 0, N/2N and fv/fem to 1e-3, Rayleigh", 30.0):
        res_1024 = solve(assemble(PROFILE, 1024, None, "fv"))
        res_2048 = solve(assemble(PROFILE, 2048, None, "fv"))
        res_fem = solve(assemble(PROFILE, 2048, None, "fem"))
        lam = res_2048.lam
        assert lam > 0.0
        assert abs(res_2048.lam - res_1024.lam) / lam < 1e-3
        assert abs(res_2048.lam - res_fem.lam) / lam < 1e-3
        assert lam == pytest.approx(LAMBDA_REF, abs=1e-3)
        h = witness_field(PROFILE)
        a_val = quadratic_form_a(h, PROFILE, r_max=200.0, breakpoints=(3.0,),
                                 tail_envelope=(2e4, 2.0, 0.5)).value
        l2, _ = norms(h, PROFILE, breakpoints=(3.0,),
                      tail_envelope=(2e4, 2.0, 0.5))
        assert lam >= -a_val / l2 ** 2


def test_frequency_function():
    with _Timer("frequency identity, U bound, sqrt(I) decay rate", 5.0):
        res = solve(assemble(PROFILE, 1024, None, "fv"))
        freq = frequency_diagnostics(res)
        rel = np.max(np.abs(freq["identity_residual"])) \
            / np.max(freq["identity_scale"])
        ds = res.form.grid.ds
        assert rel < 10.0 * ds ** 2
        assert freq["U_outer_max"] <= -np.sqrt(res.lam / 8.0) * (1.0 - 0.05)
        assert freq["decay_rate_sqrtI"] >= np.sqrt(res.lam / 2.0) * 0.9


def test_flow_linearization_slope(flow_model_1024):
    with _Timer("flow linearization slope 2 +- 0.1", 10.0):
        model = flow_model_1024
        lam, mode, _ = model.flow_eigen()
        eps_list = (1e-3, 1e-4, 1e-5)
        errs = []
        for eps in eps_list:
            w = 1.0 + np.longdouble(eps) * mode.astype(np.longdouble)
            resid = model.rhs(w).astype(float) - eps * lam * mode
            errs.append(model.norm(resid))
        slope = np.polyfit(np.log(eps_list), np.log(errs), 1)[0]
        assert slope == pytest.approx(2.0, abs=0.1)


def test_flow_growth(flow_model_1024):
    with _Timer("flow growth: lambda-hat within 2%, w/delta^2 stable", 300.0):
        model = flow_model_1024
        diag = run(FlowConfig(epsilon=1e-4, N=1024), model=model)
        assert diag.status == "completed"
        assert abs(diag.lambda_hat - diag.lambda_model) \
            <= 0.02 * diag.lambda_model
        ratio_full = diag.w_over_delta2_max
        assert np.isfinite(ratio_full) and ratio_full > 0.0
        half = run(FlowConfig(epsilon=5e-5, N=1024), model=model)
        stability = half.w_over_delta2_max / ratio_full
        assert 1.0 / 1.25 <= stability <= 1.25


def test_ancient_family_overlay(flow_model_1024):
    with _Timer("ancient overlay: slope 2 +- 0.3, tails at lambda +- 2%", 600.0):
        model = flow_model_1024
        rep = ancient_family(FlowConfig(N=1024), [1e-3, 10.0 ** -3.5, 1e-4],
                             model=model)
        assert rep["slope"] == pytest.approx(2.0, abs=0.3)
        for lam_hat in rep["lambda_hats"].values():
            assert abs(lam_hat - rep["lambda"]) <= 0.02 * rep["lambda"]
        assert rep["verdict"] == "PASS"
