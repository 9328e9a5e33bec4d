"""Static SVG plots for harness CSV output (histogram, CDF overlay,
log-log slope fit).  Rendering is headless; files are self-contained."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .errors import ConfigurationError


def _finish(fig, out: Path) -> Path:
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, format="svg")
    plt.close(fig)
    return out


def histogram(values, out, xlabel: str = "value", bins: int = 40,
              title: str = "") -> Path:
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ConfigurationError("no data to plot")
    fig, ax = plt.subplots(figsize=(5.5, 3.8))
    ax.hist(values, bins=bins, density=True, alpha=0.75, edgecolor="white")
    ax.set_xlabel(xlabel)
    ax.set_ylabel("density")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    return _finish(fig, out)


def cdf_overlay(values, out, ref=None, ref_label: str = "reference",
                xlabel: str = "value", title: str = "") -> Path:
    """Empirical CDF of ``values`` with an optional reference curve
    (callable x -> CDF(x)) overlaid."""
    values = np.sort(np.asarray(values, dtype=float))
    if values.size == 0:
        raise ConfigurationError("no data to plot")
    ecdf = np.arange(1, values.size + 1) / values.size
    fig, ax = plt.subplots(figsize=(5.5, 3.8))
    ax.step(values, ecdf, where="post", label="empirical")
    if ref is not None:
        grid = np.linspace(values[0], values[-1], 400)
        ax.plot(grid, [float(ref(g)) for g in grid], "--", label=ref_label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("CDF")
    ax.legend(loc="best")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    return _finish(fig, out)


def loglog_fit(xs, ys, out, xlabel: str = "x", ylabel: str = "y",
               title: str = "") -> float:
    """Log-log scatter with a least-squares power-law fit; returns the
    fitted slope (also annotated on the plot)."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    keep = (xs > 0) & (ys > 0) & np.isfinite(xs) & np.isfinite(ys)
    if np.count_nonzero(keep) < 2:
        raise ConfigurationError("need at least two positive points for a log-log fit")
    lx, ly = np.log(xs[keep]), np.log(ys[keep])
    slope, intercept = np.polyfit(lx, ly, 1)
    fig, ax = plt.subplots(figsize=(5.5, 3.8))
    ax.loglog(xs[keep], ys[keep], "o", label="data")
    grid = np.linspace(lx.min(), lx.max(), 50)
    ax.loglog(np.exp(grid), np.exp(intercept + slope * grid), "--",
              label=f"slope {slope:.3f}")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.legend(loc="best")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    _finish(fig, out)
    return float(slope)
