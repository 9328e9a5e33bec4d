"""Monte Carlo estimation of small singular-value tails of X - z outside the
disk, and of small-eta resolvent moments.

The reference shape for the lower tail at delta = |z|^2 - 1 is

    P(lambda_1 <= y delta^{3/2}) <~ y^2 (n delta^2)^{4/3} e^{-n delta^2 / 2},

used with constant 1 as a rare-event budget check: configurations whose
predicted hit count (RHS x trials) is below 25 are refused outright rather
than silently returning empty counters (no importance sampling here).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ensembles import EntryDistribution, sample_iid
from .errors import ConfigurationError
from .hermitization import resolvent_trace, singular_spectrum
from .seeding import mix64, rng_from
from .stats import wilson_interval

MIN_EXPECTED_HITS = 25.0


def predicted_tail(n: int, delta: float, y: float) -> float:
    """RHS of the lower-tail bound with constant 1 (capped at 1)."""
    return min(1.0, y * y * (n * delta * delta) ** (4.0 / 3.0)
               * math.exp(-0.5 * n * delta * delta))


@dataclass(frozen=True)
class TailExperiment:
    n: int
    ensemble: str
    delta: float
    thresholds: np.ndarray      # y-values (scaled mode) or absolute values
    scaled: bool
    trials: int
    counts: np.ndarray
    estimates: np.ndarray
    intervals: list

    def __post_init__(self):
        if np.any(np.diff(self.estimates) < 0.0):
            raise ConfigurationError("tail estimates must be nondecreasing")


def tail_validate(config: dict) -> np.ndarray:
    """Validate a tail config (delta window, threshold range, rare-event
    budget) and return the sorted thresholds.  Raises ConfigurationError."""
    n = int(config["n"])
    delta = float(config["delta"])
    trials = int(config["trials"])
    scaled = bool(config.get("scaled", True))
    thresholds = np.sort(np.asarray(list(config["thresholds"]), dtype=float))
    if thresholds.size == 0:
        raise ConfigurationError("no thresholds given")
    lo, hi = 2.0 / math.sqrt(n), 0.3
    if not lo <= delta <= hi:
        raise ConfigurationError(
            f"delta={delta:.4g} outside the validity window [{lo:.4g}, {hi}]")
    if scaled:
        if np.any(thresholds > 1.0) and not config.get("allow_large_y", False):
            raise ConfigurationError(
                "y > 1 is outside the default validity range; "
                "set allow_large_y to override")
        worst = predicted_tail(n, delta, float(thresholds[0]))
        if worst * trials < MIN_EXPECTED_HITS:
            need = int(math.ceil(MIN_EXPECTED_HITS / max(worst, 1e-300)))
            raise ConfigurationError(
                f"rare-event budget: predicted {worst * trials:.1f} hits at "
                f"y={thresholds[0]:.3g} (need >= {MIN_EXPECTED_HITS:.0f}); "
                f"use trials >= {need} or a larger threshold")
    return thresholds


def tail_trial(config: dict, index: int) -> float:
    """Smallest singular value of a fresh sample of X - sqrt(1+delta)."""
    n = int(config["n"])
    delta = float(config["delta"])
    seed = int(config.get("seed", 0))
    dist = EntryDistribution(config.get("ensemble", "complex-gaussian"))
    X = sample_iid(n, dist, seed=mix64(seed, index))
    return float(singular_spectrum(X, complex(math.sqrt(1.0 + delta))).lambdas[0])


def tail_from_samples(config: dict, lam1s) -> TailExperiment:
    thresholds = tail_validate(config)
    n = int(config["n"])
    delta = float(config["delta"])
    scaled = bool(config.get("scaled", True))
    lam1s = np.asarray(lam1s, dtype=float)
    trials = lam1s.size
    cut = thresholds * delta ** 1.5 if scaled else thresholds
    counts = (lam1s[:, None] <= cut[None, :]).sum(axis=0).astype(np.int64)
    estimates = counts / trials
    intervals = [wilson_interval(int(c), trials) for c in counts]
    return TailExperiment(n=n, ensemble=config.get("ensemble", "complex-gaussian"),
                          delta=delta, thresholds=thresholds,
                          scaled=scaled, trials=trials, counts=counts,
                          estimates=estimates, intervals=intervals)


def tail_estimate(config: dict) -> TailExperiment:
    """Fresh-sample Monte Carlo of P(lambda_1^z <= threshold).

    config keys: n, delta, thresholds (iterable), trials, seed; optional
    ensemble (default complex-gaussian), scaled (default True: thresholds are
    y with cutoff y*delta^{3/2}), allow_large_y (default False).
    """
    tail_validate(config)
    trials = int(config["trials"])
    lam1s = [tail_trial(config, i) for i in range(trials)]
    return tail_from_samples(config, lam1s)


@dataclass(frozen=True)
class MomentTable:
    n: int
    eta: float
    delta: float
    ks: tuple
    moments: np.ndarray
    intervals: list             # bootstrap percentile CIs per k
    trials: int
    scale: float                # sqrt(n) * eta, the deterministic reference


def resolvent_moment_estimate(config: dict) -> MomentTable:
    """Empirical moments E[(Im <G^z(i eta)>)^k] for k in {1, 2, 4}.

    config keys: n, eta, delta, trials, seed; optional ensemble,
    eps1/eps2 (window exponents, default 0.05), bootstrap (default 1000).
    The admissible window is n^{-1+eps1} <= eta <= n^{-3/4-eps2}.
    """
    n = int(config["n"])
    eta = float(config["eta"])
    delta = float(config["delta"])
    trials = int(config["trials"])
    seed = int(config.get("seed", 0))
    eps1 = float(config.get("eps1", 0.05))
    eps2 = float(config.get("eps2", 0.05))
    nboot = int(config.get("bootstrap", 1000))
    kind = config.get("ensemble", "complex-gaussian")
    lo, hi = n ** (-1.0 + eps1), n ** (-0.75 - eps2)
    if not lo <= eta <= hi:
        raise ConfigurationError(
            f"eta={eta:.4g} outside the window [{lo:.4g}, {hi:.4g}]")
    dist = EntryDistribution(kind)
    z = complex(math.sqrt(1.0 + delta))
    ys = np.empty(trials)
    for i in range(trials):
        X = sample_iid(n, dist, seed=mix64(seed, i))
        spec = singular_spectrum(X, z)
        ys[i] = resolvent_trace(spec, eta).im_trace / (2 * n)
    ks = (1, 2, 4)
    moments = np.array([float(np.mean(ys ** k)) for k in ks])
    rng = rng_from(mix64(seed, 1 << 40))
    boots = np.empty((nboot, len(ks)))
    for b in range(nboot):
        resample = ys[rng.integers(0, trials, size=trials)]
        boots[b] = [np.mean(resample ** k) for k in ks]
    intervals = [(float(np.quantile(boots[:, j], 0.025)),
                  float(np.quantile(boots[:, j], 0.975))) for j in range(len(ks))]
    return MomentTable(n=n, eta=eta, delta=delta, ks=ks, moments=moments,
                       intervals=intervals, trials=trials,
                       scale=math.sqrt(n) * eta)
