"""Generic connection/curvature for diagonal cohomogeneity-one metrics.

Independent oracle used by the tests and by the flow's ansatz-closure
check.  The metric is g = diag(alpha, beta1, beta2, gamma) against the
anholonomic frame (e_0, e_1, e_2, e_3) = (d/dr, Milnor frame on S^3) with
structure constants [e_i, e_j] = 2 e_k (cyclic in 1, 2, 3), [e_0, e_i] = 0.

Each metric component is supplied as a pair (f, f') of callables that
accept complex arguments; the Christoffel symbols are then an algebraic
function of (g, g') built from the Koszul formula, and their radial
derivative (needed for Riemann) is taken by complex-step differentiation,
accurate to machine precision.  This route shares no code with the
closed-form tables of `curvature` or with the flow's profile formulas,
which is the point of keeping it.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

__all__ = [
    "christoffels_full",
    "riemann_full",
    "ricci_full",
    "deturck_vector_full",
    "bolt_metric_pairs",
]

# structure constants C^k_{ij}: [e_i, e_j] = C^k_{ij} e_k
_C = np.zeros((4, 4, 4))
for (_i, _j, _k) in [(1, 2, 3), (2, 3, 1), (3, 1, 2)]:
    _C[_k, _i, _j] = 2.0
    _C[_k, _j, _i] = -2.0

# (f, f') pairs for the four diagonal components
MetricPairs = Sequence[tuple[Callable, Callable]]


def bolt_metric_pairs(profile) -> list[tuple[Callable, Callable]]:
    """The Taub-Bolt background as (component, derivative) callables."""
    return [
        (profile.a, profile.da),
        (profile.b, profile.db),
        (profile.b, profile.db),
        (profile.c, profile.dc),
    ]


def christoffels_full(metric: MetricPairs, r) -> np.ndarray:
    """Gamma[l, i, j] with nabla_{e_i} e_j = Gamma^l_{ij} e_l (Koszul).

    Complex r is supported (the result is then complex), which is what
    makes the complex-step derivative in `riemann_full` exact.
    """
    g = np.array([f(r) for f, _ in metric])
    dg = np.array([df(r) for _, df in metric])
    G = np.zeros((4, 4, 4), dtype=g.dtype)

    def e(m, jj, ll):
        # e_m applied to g(e_j, e_l); only e_0 differentiates
        return dg[jj] if (m == 0 and jj == ll) else 0.0

    def br(ii, jj, ll):
        # <[e_i, e_j], e_l>
        return _C[ll, ii, jj] * g[ll]

    for i in range(4):
        for j in range(4):
            for l in range(4):
                val = (e(i, j, l) + e(j, i, l) - e(l, i, j)
                       + br(i, j, l) - br(j, l, i) + br(l, i, j))
                G[l, i, j] = 0.5 * val / g[l]
    return G


def riemann_full(metric: MetricPairs, r: float) -> np.ndarray:
    """R[l, k, i, j] with R(e_i, e_j) e_k = R^l_{kij} e_l, at real r."""
    G = christoffels_full(metric, r)
    h = 1e-30
    dG = christoffels_full(metric, r + 1j * h).imag / h  # e_0(Gamma)
    R = np.zeros((4, 4, 4, 4))
    zero = np.zeros_like(dG)
    for i in range(4):
        ei_G = dG if i == 0 else zero
        for j in range(4):
            ej_G = dG if j == 0 else zero
            for k in range(4):
                for l in range(4):
                    val = ei_G[l, j, k] - ej_G[l, i, k]
                    val += np.dot(G[:, j, k], G[l, i, :])
                    val -= np.dot(G[:, i, k], G[l, j, :])
                    val -= np.dot(_C[:, i, j], G[l, :, k])
                    R[l, k, i, j] = val
    return R


def ricci_full(metric: MetricPairs, r: float) -> np.ndarray:
    """Ricci tensor Ric[i, j] = sum_a R^a_{j a i} against the coframe."""
    R = riemann_full(metric, r)
    ric = np.zeros((4, 4))
    for i in range(4):
        for j in range(4):
            ric[i, j] = sum(R[a, j, a, i] for a in range(4))
    return ric


def deturck_vector_full(metric: MetricPairs, reference: MetricPairs, r: float) -> np.ndarray:
    """V^k = g^{ij} (Gamma^k_ij(g) - Gamma^k_ij(gbar)), all four components."""
    G = christoffels_full(metric, r)
    Gbar = christoffels_full(reference, r)
    ginv = 1.0 / np.array([f(r) for f, _ in metric])
    V = np.zeros(4)
    for k in range(4):
        V[k] = np.sum(ginv * (np.diagonal(G[k]) - np.diagonal(Gbar[k])))
    return V
