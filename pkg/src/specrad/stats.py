"""Small statistical estimators shared by the Monte Carlo experiments."""
from __future__ import annotations

import math

import numpy as np

from .errors import InvalidParameterError


def wilson_interval(successes: int, trials: int, z: float = 1.959963984540054):
    """Wilson score interval for a binomial proportion; valid at k = 0 or n."""
    if trials <= 0 or not 0 <= successes <= trials:
        raise InvalidParameterError(f"bad counts {successes}/{trials}")
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = (z / denom) * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials))
    # the closed form leaves O(eps) residue at the boundary counts
    lo = 0.0 if successes == 0 else max(0.0, center - half)
    hi = 1.0 if successes == trials else min(1.0, center + half)
    return lo, hi


def jackknife_se(stat, samples: np.ndarray) -> float:
    """Leave-one-out jackknife standard error of stat(samples).

    ``samples`` is an array whose first axis enumerates trials; ``stat`` maps
    such an array to a scalar.
    """
    m = samples.shape[0]
    if m < 2:
        raise InvalidParameterError("jackknife needs at least 2 samples")
    idx = np.arange(m)
    loo = np.array([stat(samples[idx != i]) for i in range(m)])
    return float(np.sqrt((m - 1) * np.mean((loo - loo.mean()) ** 2)))


def ks_statistic(values: np.ndarray, cdf) -> float:
    """One-sample Kolmogorov-Smirnov sup distance against a callable CDF."""
    x = np.sort(np.asarray(values, dtype=float))
    m = x.size
    if m == 0:
        raise InvalidParameterError("empty sample")
    f = np.asarray(cdf(x), dtype=float)
    upper = np.max(np.arange(1, m + 1) / m - f)
    lower = np.max(f - np.arange(0, m) / m)
    return float(max(upper, lower))


def pearson_corr(x: np.ndarray, y: np.ndarray) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    xc = x - x.mean()
    yc = y - y.mean()
    denom = math.sqrt(float(np.sum(xc * xc) * np.sum(yc * yc)))
    if denom == 0.0:
        return 0.0
    return float(np.sum(xc * yc) / denom)
