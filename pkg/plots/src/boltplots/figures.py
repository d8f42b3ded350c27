"""The figure kinds.

Each renderer is a pure function of the parsed artifacts: any fitting
done here (decay slopes, reference envelopes) is for display only and is
re-derived from the serialized series, never from physics code.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .io import InputError, Table, json_get, read_json, read_table  # noqa: E402

__all__ = ["FigureSpec", "KINDS", "render"]

plt.rcParams.update({
    "figure.dpi": 110,
    "savefig.dpi": 150,
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.4,
})


@dataclass(frozen=True)
class FigureSpec:
    """What to draw: input artifact paths, figure kind, output image."""

    kind: str
    inputs: tuple[str, ...]
    out: str
    options: dict = field(default_factory=dict)


def _split_inputs(spec: FigureSpec) -> tuple[list[Table], list[tuple[str, dict]]]:
    tables, docs = [], []
    for path in spec.inputs:
        if path.endswith(".json"):
            docs.append((path, read_json(path)))
        else:
            tables.append(read_table(path))
    return tables, docs


def _one_table(tables: list[Table], kind: str) -> Table:
    if len(tables) != 1:
        raise InputError(f"{kind}: expected exactly one CSV input")
    return tables[0]


def _one_doc(docs: list[tuple[str, dict]], kind: str) -> tuple[str, dict]:
    if len(docs) != 1:
        raise InputError(f"{kind}: expected exactly one JSON summary input")
    return docs[0]


# -- kinds -------------------------------------------------------------------


def fig_curvature(spec: FigureSpec):
    t = _one_table(_split_inputs(spec)[0], "curvature")
    r, abs_rm, r3_rm, k12, u = t.require("r", "abs_Rm", "r3_abs_Rm", "K_12", "u")
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(8.0, 3.2))
    ax1.loglog(r, abs_rm, label=r"$|\mathrm{Rm}|$")
    ax1.loglog(r, np.abs(k12), label=r"$|K_{12}|$", ls="--")
    ax1.loglog(r, r3_rm, label=r"$r^3|\mathrm{Rm}|$", ls=":")
    ax1.set_xlabel("r")
    ax1.set_title("curvature decay")
    ax1.legend(frameon=False)
    ax2.semilogx(r, u, color="C3")
    ax2.axhline(1.0, color="k", lw=0.8, ls="--")
    ax2.set_xlabel("r")
    ax2.set_ylabel("u = c/b")
    ax2.set_title("fiber ratio (stays below 1)")
    fig.suptitle("Taub-Bolt curvature profile", y=1.02)
    return fig


def fig_integrand(spec: FigureSpec):
    t = _one_table(_split_inputs(spec)[0], "integrand")
    r, f, eta = t.require("r", "integrand", "cutoff")
    fig, ax = plt.subplots(figsize=(5.2, 3.4))
    ax.plot(r, f, color="C0", label="integrand")
    ax.fill_between(r, f, 0.0, where=f < 0, color="C0", alpha=0.25)
    ax.axhline(0.0, color="k", lw=0.8)
    ax.set_xlabel("r")
    ax.set_ylabel("density")
    ax2 = ax.twinx()
    ax2.plot(r, eta, color="C2", ls="--", lw=1.0, label="cutoff")
    ax2.set_ylabel("cutoff", color="C2")
    ax2.grid(False)
    ax.set_title("instability form density on the witness")
    ax.legend(frameon=False, loc="lower right")
    return fig


def fig_eigenmode(spec: FigureSpec):
    tables, docs = _split_inputs(spec)
    t = _one_table(tables, "eigenmode")
    path, doc = _one_doc(docs, "eigenmode")
    lam = float(json_get(doc, path, "lambda"))
    r, h_r, h_1, h_3, big_i, big_u = t.require("r", "h_r", "h_1", "h_3", "I", "U")

    fig, (ax1, ax2, ax3) = plt.subplots(1, 3, figsize=(10.5, 3.2))
    ax1.plot(r, h_r, label=r"$h_r$")
    ax1.plot(r, h_1, label=r"$h_1$")
    ax1.plot(r, h_3, label=r"$h_3$")
    ax1.set_xlim(0.0, min(r.max(), 20.0))
    ax1.set_xlabel("r")
    ax1.set_title(rf"unstable mode, $\lambda = {lam:.5f}$")
    ax1.legend(frameon=False)

    pos = big_i > 0.0
    ax2.semilogy(r[pos], big_i[pos], color="C0", label="I(r)")
    outer = pos & (r >= 0.5 * r.max())
    if np.count_nonzero(outer) >= 2:
        slope, icpt = np.polyfit(r[outer], np.log(big_i[outer]), 1)
        ax2.semilogy(r[outer], np.exp(icpt + slope * r[outer]), "k--", lw=1.0,
                     label=f"fit: slope {slope:.3f}")
    ref = -np.sqrt(lam / 2.0)
    i0 = int(np.argmax(outer)) if outer.any() else 0
    ax2.semilogy(r[pos], big_i[i0] * np.exp(ref * (r[pos] - r[i0])), "C3:",
                 label=rf"slope $-\sqrt{{\lambda/2}} = {ref:.3f}$")
    ax2.set_xlabel("r")
    ax2.set_title("frequency integral decay")
    ax2.legend(frameon=False, fontsize=7)

    ax3.plot(r, big_u, color="C0", label="U(r)")
    bound = -np.sqrt(lam / 8.0)
    ax3.axhline(bound, color="C3", ls="--",
                label=rf"$-\sqrt{{\lambda/8}} = {bound:.3f}$")
    ax3.set_ylim(-1.5, 0.5)
    ax3.set_xlabel("r")
    ax3.set_title("drift quotient")
    ax3.legend(frameon=False, fontsize=7)
    return fig


def fig_flow(spec: FigureSpec):
    tables, docs = _split_inputs(spec)
    t = _one_table(tables, "flow")
    path, doc = _one_doc(docs, "flow")
    lam = float(json_get(doc, path, "lambda_model"))
    eps = float(json_get(doc, path, "config", "epsilon"))
    tt, nv, nw = t.require("t", "norm_v_L2", "norm_w_L2")

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(8.0, 3.2))
    delta = np.exp(lam * tt)
    ax1.semilogy(tt, nv, color="C0", label=r"$\|v\|_2(t)$")
    ax1.semilogy(tt, delta, "k--", lw=1.0,
                 label=r"$\varepsilon\,e^{\lambda(t - t_0)}$")
    ax1.set_xlabel("t")
    ax1.set_title(rf"growth along the mode, $\varepsilon = {eps:g}$")
    ax1.legend(frameon=False)

    ratio = np.divide(nw, delta ** 2, out=np.zeros_like(nw),
                      where=delta > 0.0)
    ax2.plot(tt, ratio, color="C2")
    ax2.set_xlabel("t")
    ax2.set_ylabel(r"$\|w\|_2 / \delta^2(t)$")
    ax2.set_title("quadratic remainder stays bounded")
    return fig


def fig_overlay(spec: FigureSpec):
    tables, docs = _split_inputs(spec)
    path, doc = _one_doc(docs, "overlay")
    if len(tables) < 2:
        raise InputError("overlay: need at least two flow CSV inputs")
    lam = float(json_get(doc, path, "lambda"))
    pairs = json_get(doc, path, "pairs")
    slope = float(json_get(doc, path, "slope"))

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(8.0, 3.2))
    for t in tables:
        tt, nv = t.require("t", "norm_v_L2")
        eps = nv[0]
        t0 = np.log(eps) / lam
        ax1.semilogy(tt - t0, nv / eps, label=rf"$\varepsilon = {eps:.1e}$")
    s = np.linspace(0.0, np.log(20.0) / lam, 50)
    ax1.semilogy(s, np.exp(lam * s), "k--", lw=1.0, label=r"$e^{\lambda s}$")
    ax1.set_xlabel(r"$t - t_0(\varepsilon)$")
    ax1.set_ylabel(r"$\|v\|_2 / \varepsilon$")
    ax1.set_title("time-shifted trajectories collapse")
    ax1.legend(frameon=False, fontsize=7)

    try:
        eps1 = np.array([float(p["eps_1"]) for p in pairs])
        disc = np.array([float(p["discrepancy"]) for p in pairs])
    except (TypeError, KeyError) as exc:
        raise InputError(f"{path}: malformed pairs entry ({exc})") from exc
    ax2.loglog(eps1, disc, "o-", color="C0",
               label=f"pair discrepancy (slope {slope:.2f})")
    ax2.loglog(eps1, disc[0] * (eps1 / eps1[0]) ** 2, "k--", lw=1.0,
               label="slope-2 reference")
    ax2.set_xlabel(r"$\varepsilon$")
    ax2.set_ylabel("overlay discrepancy")
    ax2.set_title("quadratic convergence to one ancient flow")
    ax2.legend(frameon=False, fontsize=7)
    return fig


def fig_frequency(spec: FigureSpec):
    tables, docs = _split_inputs(spec)
    t = _one_table(tables, "frequency")
    path, doc = _one_doc(docs, "frequency")
    lam = float(json_get(doc, path, "lambda"))
    r, big_i, big_d, big_u = t.require("r", "I", "D", "U")
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(8.0, 3.2))
    pos_i, pos_d = big_i > 0.0, big_d > 0.0
    ax1.semilogy(r[pos_i], big_i[pos_i], label="I(r)")
    ax1.semilogy(r[pos_d], big_d[pos_d], label="D(r)", ls="--")
    ax1.set_xlabel("r")
    ax1.set_title("frequency data")
    ax1.legend(frameon=False)
    ax2.plot(r, big_u, color="C0", label="U(r)")
    bound = -np.sqrt(lam / 8.0)
    ax2.axhline(bound, color="C3", ls="--",
                label=rf"$-\sqrt{{\lambda/8}} = {bound:.3f}$")
    ax2.set_ylim(-1.5, 0.5)
    ax2.set_xlabel("r")
    ax2.set_title("drift quotient vs bound")
    ax2.legend(frameon=False, fontsize=7)
    return fig


KINDS = {
    "curvature": fig_curvature,
    "integrand": fig_integrand,
    "eigenmode": fig_eigenmode,
    "frequency": fig_frequency,
    "flow": fig_flow,
    "overlay": fig_overlay,
}


def render(spec: FigureSpec) -> str:
    """Render one figure to ``spec.out``; returns the output path."""
    if spec.kind not in KINDS:
        raise InputError(
            f"unknown figure kind {spec.kind!r} (choose from "
            f"{', '.join(sorted(KINDS))})")
    if not spec.inputs:
        raise InputError("no input files given")
    fig = KINDS[spec.kind](spec)
    try:
        fig.savefig(spec.out, bbox_inches="tight",
                    metadata={"Software": "boltplots"})
    finally:
        plt.close(fig)
    return spec.out
