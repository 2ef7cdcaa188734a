"""Figure rendering for the CLI report paths.

Every report CSV gets a companion PNG with the same stem.  CSV remains the
machine-readable interface; the figures are for eyeballing.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def _save(fig, out_path):
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def plot_coefficient_paths(path, names, out_path) -> None:
    """Piecewise-linear coefficient trajectories against log(1 + lam)."""
    from .path import fit_at

    lams = path.transition_lambdas
    coefs = np.array([fit_at(path, float(l)).beta for l in lams])
    fig, ax = plt.subplots(figsize=(7, 5))
    x = np.log1p(lams)
    for j in range(coefs.shape[1]):
        ax.plot(x, coefs[:, j], lw=1)
    if len(names) <= 12:
        for j, name in enumerate(names):
            ax.annotate(name, (x[-1], coefs[-1, j]), fontsize=7)
    ax.set_xlabel("log(1 + lambda)")
    ax.set_ylabel("coefficient")
    ax.set_title("Lasso coefficient paths")
    ax.axhline(0.0, color="k", lw=0.5)
    _save(fig, out_path)


def plot_criterion_curve(report, out_path) -> None:
    """Criterion value at each transition with the chosen point marked."""
    lams = [r[0] for r in report.rows]
    vals = [r[3] for r in report.rows]
    fig, ax = plt.subplots(figsize=(7, 5))
    ax.plot(np.log1p(lams), vals, "o-", ms=3)
    ax.axvline(np.log1p(report.chosen_lambda), color="r", ls="--", lw=1)
    ax.set_xlabel("log(1 + lambda)")
    ax.set_ylabel(report.criterion)
    ax.set_title(f"{report.criterion} over transition values (chosen df={report.chosen_df})")
    _save(fig, out_path)


def plot_df_curve(rows, out_path) -> None:
    """df estimate as a step function of lambda; rows are (lam, rss, df, ...)."""
    lams = [r[0] for r in rows]
    dfs = [r[2] for r in rows]
    fig, ax = plt.subplots(figsize=(7, 5))
    ax.step(np.log1p(lams), dfs, where="post")
    ax.set_xlabel("log(1 + lambda)")
    ax.set_ylabel("df estimate")
    ax.set_title("Degrees of freedom along the path")
    _save(fig, out_path)


def plot_unbiasedness(report, summary, out_path) -> None:
    """Two panels: mean active-set size vs Monte Carlo df, and the bias
    with pointwise 95% bands."""
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7, 8))
    ax1.plot(report.df_mc, report.e_active, "o", ms=3)
    lo = min(report.df_mc.min(), report.e_active.min())
    hi = max(report.df_mc.max(), report.e_active.max())
    ax1.plot([lo, hi], [lo, hi], "k-", lw=1)
    ax1.set_xlabel("Monte Carlo df")
    ax1.set_ylabel("mean nonzero count")
    ax1.set_title("Unbiasedness of the nonzero-count df estimate")
    ax2.plot(report.df_mc, summary.bias, "o", ms=3)
    ax2.plot(report.df_mc, summary.ci_lo, "k--", lw=0.8)
    ax2.plot(report.df_mc, summary.ci_hi, "k--", lw=0.8)
    ax2.axhline(0.0, color="k", lw=0.5)
    ax2.set_xlabel("Monte Carlo df")
    ax2.set_ylabel("bias")
    ax2.set_title(f"Bias with 95% bands (coverage {summary.coverage_fraction:.2f})")
    _save(fig, out_path)


def plot_conjecture_bias(report, out_path) -> None:
    """Per-k bias of the last-step-with-k-predictors df with 95% bands."""
    rows = [r for r in report.rows if np.isfinite(r[1])]
    ks = [r[0] for r in rows]
    bias = np.array([r[2] for r in rows])
    se = np.array([r[3] for r in rows])
    fig, ax = plt.subplots(figsize=(7, 5))
    ax.plot(ks, bias, "o-", ms=3)
    ax.plot(ks, bias - 1.96 * se, "k--", lw=0.8)
    ax.plot(ks, bias + 1.96 * se, "k--", lw=0.8)
    ax.axhline(0.0, color="k", lw=0.5)
    ax.set_xlabel("k")
    ax.set_ylabel("k - Monte Carlo df")
    ax.set_title("Bias of df = k at the last step with k predictors")
    _save(fig, out_path)
