"""Covariant calculus on diagonal radial 2-tensor fields.

Everything is expressed in the orthonormal frame
(e0, e1, e2, e3) = (dr/sqrt(a)-dual, sigma_1-dir/sqrt(b),
sigma_2-dir/sqrt(b), sigma_3-dir/sqrt(c)); the nonzero connection data
reduce to three scalars

    beta  = b' / (2 b sqrt(a))   (e1, e2 against the radial direction)
    gamma = c' / (2 c sqrt(a))   (e3 against the radial direction)
    tau   = sqrt(c) / b          (the S^3 torsion-like coefficient)

derived from the Christoffel table of the background.  For a diagonal
radial field h with frame components (h_r, h_1, h_1, h_3) the full
covariant gradient has the closed component pattern implemented in
`covariant_gradient`, giving

    |grad h|^2 = (h_r'^2 + 2 h_1'^2 + h_3'^2)/a
                 + 4 beta^2 (h_r - h_1)^2 + 2 gamma^2 (h_r - h_3)^2
                 + 4 tau^2 (h_1 - h_3)^2.

The quadratic form a(h) = integral (|grad h|^2 - curvature pairing) nu dr
and the Lichnerowicz operator are its Euler-Lagrange data; the form is
assembled per unit S^3 volume (density nu = 4 n b).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curvature import shared_sectional
from .fields import DiagonalTensorField
from .profile import BoltProfile
from .quadrature import QuadratureResult, integrate

__all__ = [
    "FrameConnection",
    "frame_connection",
    "covariant_gradient",
    "grad_norm_sq",
    "curvature_pairing",
    "quadratic_form_a",
    "form_integrand",
    "norms",
    "lichnerowicz",
]

# L^2 multiplicities of the stored components (h_r, h_1, h_3): h_1 counts twice
MULTIPLICITY = np.array([1.0, 2.0, 1.0])


@dataclass(frozen=True)
class FrameConnection:
    """Connection scalars (beta, gamma, tau) and the profile values at r."""

    r: np.ndarray | float
    a: np.ndarray | float
    beta: np.ndarray | float
    gamma: np.ndarray | float
    tau: np.ndarray | float


def frame_connection(profile: BoltProfile, r) -> FrameConnection:
    rr = np.asarray(r, dtype=float)
    if np.any(rr <= 0):
        raise ValueError("frame connection requires r > 0")
    v = profile.eval(rr)
    sa = np.sqrt(v.a)
    return FrameConnection(
        r=rr,
        a=v.a,
        beta=v.db / (2.0 * v.b * sa),
        gamma=v.dc / (2.0 * v.c * sa),
        tau=np.sqrt(v.c) / v.b,
    )


def covariant_gradient(h: DiagonalTensorField, profile: BoltProfile, r):
    """All nonzero frame components of grad h at r > 0.

    Returns a dict keyed by index triples (c, a, b) for (grad h)_{c;ab}
    over the frame (r, 1, 2, 3); components not listed vanish identically
    for a diagonal radial field (the (3; 1 2) slot, for instance, is
    proportional to h_1 - h_2 = 0).
    """
    conn = frame_connection(profile, r)
    hr, h1, h3 = h.components(r)
    dhr, dh1, dh3 = h.derivatives(r)
    sa = np.sqrt(conn.a)
    d01 = hr - h1
    d03 = hr - h3
    d13 = h1 - h3
    g = {
        ("r", "r", "r"): dhr / sa,
        ("r", "1", "1"): dh1 / sa,
        ("r", "2", "2"): dh1 / sa,
        ("r", "3", "3"): dh3 / sa,
        ("1", "1", "r"): conn.beta * d01,
        ("1", "r", "1"): conn.beta * d01,
        ("2", "2", "r"): conn.beta * d01,
        ("2", "r", "2"): conn.beta * d01,
        ("3", "3", "r"): conn.gamma * d03,
        ("3", "r", "3"): conn.gamma * d03,
        ("1", "2", "3"): conn.tau * d13,
        ("1", "3", "2"): conn.tau * d13,
        ("2", "1", "3"): -conn.tau * d13,
        ("2", "3", "1"): -conn.tau * d13,
    }
    return g


def grad_norm_sq(h: DiagonalTensorField, profile: BoltProfile, r):
    """|grad h|^2 assembled as the sum of squares of covariant_gradient."""
    g = covariant_gradient(h, profile, r)
    return sum(v * v for v in g.values())


def curvature_pairing(h: DiagonalTensorField, profile: BoltProfile, r):
    """The pairing 2 R^{mu alpha beta nu} h_{alpha beta} h_{mu nu}
    = 2 sum over ordered frame pairs i != j of K_ij h_i h_j.

    Vanishes on pure-trace fields (Ricci flatness); for the witness
    direction (1, -1, -1, 1) it equals 16 K with K the shared sectional
    curvature, i.e. 4 (K_r3 + K_12 - K_13 - K_23 - K_r1 - K_r2).
    """
    K = shared_sectional(profile, r)
    hr, h1, h3 = h.components(r)
    # K_12 = K_r3 = K; K_1r = K_2r = K_13 = K_23 = -K/2
    return 4.0 * K * (h1 - hr) * (h1 - h3)


def form_integrand(h: DiagonalTensorField, profile: BoltProfile, r):
    """Pointwise integrand |grad h|^2 - pairing (before the nu weight)."""
    return grad_norm_sq(h, profile, r) - curvature_pairing(h, profile, r)


def _nu(profile: BoltProfile, r):
    return 4.0 * profile.n * profile.b(np.asarray(r, dtype=float))


def quadratic_form_a(
    h: DiagonalTensorField,
    profile: BoltProfile,
    r_max: float = 200.0,
    breakpoints=(),
    tail_envelope=None,
) -> QuadratureResult:
    """a(h) = integral (|grad h|^2 - pairing) nu dr, per unit S^3 volume.

    Adaptive quadrature with reported error estimate and optional analytic
    tail bound; divergent integrals raise instead of truncating silently.
    """

    def f(r):
        return float(form_integrand(h, profile, r) * _nu(profile, r))

    return integrate(f, r_max=r_max, breakpoints=breakpoints,
                     tail_envelope=tail_envelope)


def norms(h: DiagonalTensorField, profile: BoltProfile, r_max: float = 200.0,
          breakpoints=(), tail_envelope=None) -> tuple[float, float]:
    """(L^2, H^1) norms per unit S^3 volume.

    L^2 uses the density nu; the H^1 norm is the sum of the gradient
    seminorm and the weighted norm with weight 1/(r+1)^2.
    """

    def sq(r):
        hr, h1, h3 = h.components(r)
        return float((hr * hr + 2.0 * h1 * h1 + h3 * h3) * _nu(profile, r))

    l2sq = integrate(sq, r_max=r_max, breakpoints=breakpoints,
                     tail_envelope=tail_envelope)

    def gsq(r):
        return float(grad_norm_sq(h, profile, r) * _nu(profile, r))

    def wsq(r):
        return sq(r) / (r + 1.0) ** 2

    gradsq = integrate(gsq, r_max=r_max, breakpoints=breakpoints,
                       tail_envelope=tail_envelope)
    weighted = integrate(wsq, r_max=r_max, breakpoints=breakpoints,
                         tail_envelope=tail_envelope)
    l2 = float(np.sqrt(l2sq.value))
    h1n = float(np.sqrt(gradsq.value) + np.sqrt(weighted.value))
    return l2, h1n


def _pairing_gradient(profile: BoltProfile, r, comps):
    """d(pairing)/d(h_r, h_1, h_3) with the multiplicity-free convention
    pairing = 4 [2 K_1r h_r h_1 + K_r3 h_r h_3 + K_12 h_1^2 + 2 K_13 h_1 h_3]."""
    K = shared_sectional(profile, r)
    hr, h1, h3 = comps
    K1r = -0.5 * K
    K13 = -0.5 * K
    dP_dhr = 4.0 * (2.0 * K1r * h1 + K * h3)
    dP_dh1 = 4.0 * (2.0 * K1r * hr + 2.0 * K * h1 + 2.0 * K13 * h3)
    dP_dh3 = 4.0 * (K * hr + 2.0 * K13 * h1)
    return np.stack([dP_dhr, dP_dh1, dP_dh3])


def algebraic_gradient(profile: BoltProfile, r, comps):
    """Gradient in (h_r, h_1, h_3) of the algebraic part of the integrand,
    q(h) = 4 beta^2 (h_r-h_1)^2 + 2 gamma^2 (h_r-h_3)^2
           + 4 tau^2 (h_1-h_3)^2 - pairing."""
    conn = frame_connection(profile, r)
    hr, h1, h3 = comps
    d01 = hr - h1
    d03 = hr - h3
    d13 = h1 - h3
    b2, g2, t2 = conn.beta ** 2, conn.gamma ** 2, conn.tau ** 2
    grad = np.stack([
        8.0 * b2 * d01 + 4.0 * g2 * d03,
        -8.0 * b2 * d01 + 8.0 * t2 * d13,
        -4.0 * g2 * d03 - 8.0 * t2 * d13,
    ])
    return grad - _pairing_gradient(profile, r, comps)


def lichnerowicz(h: DiagonalTensorField, profile: BoltProfile, r):
    """The Lichnerowicz operator on the ansatz, as frame components.

    Derived as the Euler-Lagrange operator of the quadratic form so that
    integral <Lich h, k> nu dr = -a(h, k) for compactly supported fields:

        (Lich h)_i = (1/nu) d/dr (nu h_i' / a) - (1/2 m_i) dq/dh_i,

    with multiplicities m = (1, 2, 1).  Requires closed-form h with two
    analytic derivatives; grid fields go through the discrete operator of
    the spectral module.
    """
    rr = np.asarray(r, dtype=float)
    comps = h.components(rr)
    d1 = h.derivatives(rr)
    d2 = h.second_derivatives(rr)
    v = profile.eval(rr)
    # (1/nu)(nu h'/a)' = h''/a + h' (b'/(b a) - a'/a^2)   [nu'/nu = b'/b]
    radial = d2 / v.a + d1 * (v.db / (v.b * v.a) - v.da / (v.a * v.a))
    qgrad = algebraic_gradient(profile, rr, comps)
    m = MULTIPLICITY.reshape((3,) + (1,) * rr.ndim)
    return radial - qgrad / (2.0 * m)
