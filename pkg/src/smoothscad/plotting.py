"""Static figures written next to the delimited outputs.

Uses ``matplotlib.figure.Figure`` directly, so nothing touches pyplot's global
state and no display is needed.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from matplotlib.figure import Figure

from .shrinkage import DEFAULT_A, Rule, threshold

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
}
FIGSIZE = (6.0, 3.6)
DPI = 120


def _new(ncols: int = 1, figsize=FIGSIZE) -> tuple[Figure, list]:
    fig = Figure(figsize=figsize, dpi=DPI, layout="constrained")
    axes = fig.subplots(1, ncols, squeeze=False)[0]
    for ax in axes:
        ax.tick_params(labelsize=STYLE["xtick.labelsize"])
        ax.grid(alpha=0.3, lw=0.5)
    return fig, list(axes)


def _save(fig: Figure, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path)
    return path


def shrink_curves(path, lam: float = 1.0, a: float = DEFAULT_A, span: float = 6.0, points: int = 1201) -> Path:
    """Fan-Li SCAD next to smooth SCAD, with the identity for reference."""
    d = np.linspace(-span, span, points)
    fig, (left, right) = _new(2)
    for ax, rule, title in ((left, Rule.SCAD, "SCAD"), (right, Rule.SMOOTH_SCAD, "smooth SCAD")):
        ax.plot(d, d, ls=":", lw=0.8, color="0.5")
        ax.plot(d, threshold(d, lam, a, rule), lw=1.4, color="k")
        for edge in (lam, a * lam):
            ax.axvline(edge, lw=0.5, ls="--", color="0.6")
            ax.axvline(-edge, lw=0.5, ls="--", color="0.6")
        ax.set_title(f"{title}, λ={lam:g}, a={a:g}", fontsize=STYLE["font.size"])
        ax.set_xlabel("d")
    left.set_ylabel("ρ(d)")
    return _save(fig, path)


def sure_scan(scan, path, lam_u: float | None = None) -> Path:
    fig, (ax,) = _new()
    ax.plot(scan.grid, scan.risks, lw=1.2, color="k")
    ax.axvline(scan.minimizer, color="tab:red", lw=0.8, label=f"minimizer {scan.minimizer:.4g}")
    if lam_u is not None:
        ax.axvline(lam_u, color="0.5", ls="--", lw=0.8, label=f"universal {lam_u:.4g}")
    ax.set_xlabel("λ")
    ax.set_ylabel("SURE")
    ax.legend(frameon=False)
    return _save(fig, path)


def denoised(t, noisy, estimate, path, clean=None) -> Path:
    fig, (ax,) = _new(figsize=(6.0, 3.0))
    ax.plot(t, noisy, lw=0.5, color="0.7", label="noisy")
    if clean is not None:
        ax.plot(t, clean, lw=0.8, color="tab:blue", label="clean")
    ax.plot(t, estimate, lw=1.0, color="k", label="estimate")
    ax.set_xlabel("t")
    ax.legend(frameon=False, ncols=3)
    return _save(fig, path)


def prior_curve(theta, phi, prior, path) -> Path:
    fig, (left, right) = _new(2)
    left.plot(theta, phi, color="k", lw=1.2)
    left.set_xlabel("θ")
    left.set_ylabel("Φ(|θ|)")
    right.plot(theta, prior, color="k", lw=1.2)
    right.set_xlabel("θ")
    right.set_ylabel("unnormalized prior")
    return _save(fig, path)


def bench_amse(report, path) -> Path:
    """Grouped bars of AMSE per signal, one bar per rule, Monte Carlo SE as error bars."""
    rules = [r.label for r in report.config.rules]
    signals = report.config.signals
    snrs = report.config.snr_list
    fig, axes = _new(len(snrs), figsize=(6.0 * len(snrs), 3.6))
    width = 0.8 / len(rules)
    x = np.arange(len(signals))
    for ax, snr in zip(axes, snrs):
        for k, rule in enumerate(rules):
            cells = [report.cell(s, rule, snr) for s in signals]
            ax.bar(
                x + (k - (len(rules) - 1) / 2) * width,
                [c.amse for c in cells],
                width,
                yerr=[c.mc_se for c in cells],
                label=rule,
                capsize=2,
            )
        ax.set_xticks(x, signals)
        ax.set_ylabel("AMSE")
        ax.set_title(f"SNR={snr:g}, M={report.config.replications}", fontsize=STYLE["font.size"])
    axes[0].legend(frameon=False)
    return _save(fig, path)
