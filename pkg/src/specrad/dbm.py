"""Dyson Brownian motion for singular values, and the decorrelation
experiments built on it.

Two levels of simulation:

* matrix level — the i.i.d. entries X_t = X_0 + (Brownian increments), which
  is distribution-exact at any single time (one Gaussian macro-step suffices);
  the singular spectra at several shift points z share one matrix path, which
  is how correlated spectral processes arise here.
* particle level — the mirrored-ensemble SDE

      d lam_i = db_i / sqrt(2n) + (1/2n) [ sum_{j != i} (1/(lam_i - lam_j)
                 + 1/(lam_i + lam_j)) + 1/(2 lam_i) ] dt

  integrated with Euler-Maruyama.  Collisions (sorted spacing < 1e-12)
  reject the step; the Brownian increment is then split in two by a bridge
  midpoint and each half retried, up to 40 doublings.  Particles below
  1e-14 are reflected to 1e-14 and the events counted.

The compiled backend (_dbm_cy) is preferred when importable; set the
environment variable SPECRAD_PURE to force the NumPy one.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from . import _dbm_np
from .ensembles import EntryDistribution, FlowKind, MatrixSample, evolve, sample_iid
from .errors import InvalidParameterError, NumericalFailureError
from .hermitization import (
    OverlapTable,
    driver_correlation,
    overlaps as overlap_table,
    resolvent_trace,
    singular_spectrum,
)
from .seeding import mix64, rng_from
from .stats import jackknife_se, wilson_interval

if os.environ.get("SPECRAD_PURE"):
    _backend = _dbm_np
else:
    try:
        from . import _dbm_cy as _backend   # type: ignore[attr-defined]
    except ImportError:
        _backend = _dbm_np

MAX_RETRIES = 40
DRIVER_KINDS = ("independent", "matrix-induced", "shared")


def backend_name() -> str:
    return "cython" if _backend.__name__.endswith("_dbm_cy") else "numpy"


def drift(lam: np.ndarray) -> np.ndarray:
    """Repulsion drift of the mirrored particle system."""
    return _backend.drift(np.asarray(lam, dtype=float))


@dataclass(frozen=True)
class ParticleState:
    """Positive half of a mirrored particle configuration at time t.

    alpha records which driver mixture the path is associated with
    (0 = fully independent, 1 = fully matrix-induced); it does not change
    the dynamics of a single step, which consume ready-made increments.
    """

    n: int
    alpha: float
    lambdas: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        lam = np.asarray(self.lambdas, dtype=float)
        object.__setattr__(self, "lambdas", lam)
        if lam.shape != (self.n,):
            raise InvalidParameterError(
                f"expected {self.n} particles, got shape {lam.shape}")
        if not 0.0 <= self.alpha <= 1.0:
            raise InvalidParameterError(f"alpha must lie in [0,1], got {self.alpha}")
        if np.any(lam <= 0.0):
            raise InvalidParameterError("particles must be strictly positive")
        if np.any(np.diff(lam) < 0.0):
            raise InvalidParameterError("particles must be ascending")


@dataclass(frozen=True)
class DriverSpec:
    """How the Brownian increments of a particle path are sourced."""

    kind: str
    correlation: Sequence[OverlapTable] | None = None

    def __post_init__(self):
        if self.kind not in DRIVER_KINDS:
            raise InvalidParameterError(
                f"driver kind must be one of {DRIVER_KINDS}, got {self.kind!r}")
        if self.kind == "matrix-induced" and self.correlation is None:
            raise InvalidParameterError("matrix-induced drivers need overlap tables")


def combine_drivers(alpha: float, primary: np.ndarray, secondary: np.ndarray) -> np.ndarray:
    """Variance-preserving mixture sqrt(alpha)*primary + sqrt(1-alpha)*secondary."""
    if not 0.0 <= alpha <= 1.0:
        raise InvalidParameterError(f"alpha must lie in [0,1], got {alpha}")
    return math.sqrt(alpha) * np.asarray(primary, float) \
        + math.sqrt(1.0 - alpha) * np.asarray(secondary, float)


_BRIDGE_RNG = rng_from(mix64(0x5B1DCE, 0))


def _advance(lam: np.ndarray, dt: float, incr: np.ndarray,
             rng: np.random.Generator, depth: int, stats: dict) -> np.ndarray:
    """One EM step with bridge-split retries on collision."""
    out, done, refl = _backend.em_path(lam, dt, incr[None, :])
    stats["reflections"] += refl
    if done == 1:
        return out
    stats["rejections"] += 1
    if depth >= MAX_RETRIES:
        spacing = float(np.min(np.diff(lam))) if lam.size > 1 else float(lam[0])
        raise NumericalFailureError(
            f"particle collision persisted through {MAX_RETRIES} halvings "
            f"(dt={dt:.3e}, min spacing={spacing:.3e})")
    # Brownian bridge: midpoint value of the increment over [0, dt].
    xi = rng.standard_normal(lam.size) * (math.sqrt(dt) / 2.0)
    first = 0.5 * incr + xi
    second = incr - first
    mid = _advance(lam, 0.5 * dt, first, rng, depth + 1, stats)
    return _advance(mid, 0.5 * dt, second, rng, depth + 1, stats)


def dbm_step(state: ParticleState, dt: float, drivers: np.ndarray,
             rng: np.random.Generator | None = None) -> ParticleState:
    """Single Euler-Maruyama update by increments of variance dt."""
    if dt <= 0.0:
        raise InvalidParameterError(f"dt must be positive, got {dt}")
    drivers = np.asarray(drivers, dtype=float)
    if drivers.shape != (state.n,):
        raise InvalidParameterError(
            f"need {state.n} driver increments, got shape {drivers.shape}")
    stats = {"reflections": 0, "rejections": 0}
    lam = _advance(state.lambdas, dt, drivers, rng or _BRIDGE_RNG, 0, stats)
    return replace(state, lambdas=lam, t=state.t + dt)


def run_particle_path(state: ParticleState, t_target: float, steps: int,
                      rng: np.random.Generator,
                      stats: dict | None = None) -> ParticleState:
    """Advance to t_target in `steps` equal EM steps with fresh increments.

    Whole blocks run inside the backend; only collision steps fall back to
    the bridge-splitting python path.
    """
    if t_target <= state.t:
        raise InvalidParameterError("t_target must exceed the current time")
    if steps < 1:
        raise InvalidParameterError("steps must be >= 1")
    dt = (t_target - state.t) / steps
    incr = rng.standard_normal((steps, state.n)) * math.sqrt(dt)
    if stats is None:
        stats = {"reflections": 0, "rejections": 0}
    lam = np.asarray(state.lambdas, dtype=float)
    k = 0
    while k < steps:
        lam_out, done, refl = _backend.em_path(lam, dt, incr[k:])
        stats["reflections"] += refl
        k += done
        lam = lam_out
        if k < steps:   # collision at step k: bridge-split just that step
            stats["rejections"] += 1
            lam = _advance(lam, dt, incr[k], rng, 1, stats)
            k += 1
    return replace(state, lambdas=lam, t=t_target)


# --------------------------------------------------------------------------
# Matrix-level flows
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class MatrixFlowPair:
    """Singular spectra of one matrix Brownian path at two shift points."""

    z1: complex
    z2: complex
    times: np.ndarray
    lambdas1: np.ndarray           # (len(times), n), ascending rows
    lambdas2: np.ndarray
    overlaps: list
    driver_corr: list

    @property
    def final1(self) -> np.ndarray:
        return self.lambdas1[-1]

    @property
    def final2(self) -> np.ndarray:
        return self.lambdas2[-1]


def run_matrix_flow_pair(X0: MatrixSample, z1: complex, z2: complex,
                         t1: float, steps: int, seed: int,
                         k_window: int = 8,
                         want_overlaps: bool = True) -> MatrixFlowPair:
    """Evolve one shared entry-level Brownian path, recording both spectra.

    Each macro-step adds exact Gaussian increments; singular value
    decompositions happen only at the recording times.  The reported
    driver correlation for indices (i, j) is
    4 Re[<u_i^{z1}, u_j^{z2}> <v_j^{z2}, v_i^{z1}>] evaluated on the
    half-normalized doubled eigenvectors, i.e. Re[<u_i, u_j><v_j, v_i>]
    on unit singular vectors.
    """
    if steps < 1:
        raise InvalidParameterError("steps must be >= 1")
    if t1 <= 0.0:
        raise InvalidParameterError("t1 must be positive")
    flow = FlowKind("brownian")
    dt = t1 / steps
    X = X0
    times = [0.0]
    s1 = singular_spectrum(X, z1, want_vectors=want_overlaps)
    s2 = singular_spectrum(X, z2, want_vectors=want_overlaps)
    l1, l2 = [s1.lambdas], [s2.lambdas]
    tables, corrs = [], []
    if want_overlaps:
        tables.append(overlap_table(s1, s2, k_window))
        corrs.append(driver_correlation(s1, s2, k_window))
    for k in range(steps):
        X = evolve(X, flow, dt, seed=mix64(seed, k))
        times.append((k + 1) * dt)
        s1 = singular_spectrum(X, z1, want_vectors=want_overlaps)
        s2 = singular_spectrum(X, z2, want_vectors=want_overlaps)
        l1.append(s1.lambdas)
        l2.append(s2.lambdas)
        if want_overlaps:
            tables.append(overlap_table(s1, s2, k_window))
            corrs.append(driver_correlation(s1, s2, k_window))
    return MatrixFlowPair(z1=z1, z2=z2, times=np.array(times),
                          lambdas1=np.vstack(l1), lambdas2=np.vstack(l2),
                          overlaps=tables, driver_corr=corrs)


# --------------------------------------------------------------------------
# Decorrelation statistics
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DecorrelationStats:
    z1: complex
    z2: complex
    t1: float
    joint_tail: float
    joint_interval: tuple
    marginal_tails: tuple
    marginal_intervals: tuple
    trace_cov: float
    trace_cov_se: float
    trace_vars: tuple
    coupling_dist: np.ndarray | None
    trials: int


def decorrelation_trial(config: dict, index: int) -> tuple:
    """One fresh-sample measurement for decorrelation_experiment.

    Returns (lambda_1 at z1, lambda_1 at z2, Im<G^{z1}(i eta)>, Im<G^{z2}>).
    Exposed separately so the harness can farm trials out to workers while
    reproducing the library loop bit for bit.
    """
    n = int(config["n"])
    z1, z2 = complex(config["z1"]), complex(config["z2"])
    eta = float(config["eta_tilde"])
    seed = int(config.get("seed", 0))
    t1 = float(config.get("t1", 0.0))
    dist = EntryDistribution(config.get("ensemble", "complex-gaussian"))
    X = sample_iid(n, dist, seed=mix64(seed, 2 * index))
    if t1 > 0.0:
        X = evolve(X, FlowKind("brownian"), t1, seed=mix64(seed, 2 * index + 1))
    s1 = singular_spectrum(X, z1)
    s2 = singular_spectrum(X, z2)
    return (s1.lambdas[0], s2.lambdas[0],
            resolvent_trace(s1, eta).im_trace / (2 * n),
            resolvent_trace(s2, eta).im_trace / (2 * n))


def decorrelation_stats(config: dict, samples) -> DecorrelationStats:
    """Aggregate per-trial tuples from decorrelation_trial."""
    z1, z2 = complex(config["z1"]), complex(config["z2"])
    a = float(config["threshold"])
    t1 = float(config.get("t1", 0.0))
    arr = np.asarray(samples, dtype=float)
    trials = arr.shape[0]
    if trials < 2:
        raise InvalidParameterError("need at least 2 trials")
    lam1, lam2, tr1, tr2 = arr.T
    hit1 = lam1 <= a
    hit2 = lam2 <= a
    joint = int(np.count_nonzero(hit1 & hit2))
    k1, k2 = int(np.count_nonzero(hit1)), int(np.count_nonzero(hit2))
    pairs = np.column_stack([tr1, tr2])
    cov = float(np.cov(tr1, tr2, ddof=1)[0, 1])
    cov_se = jackknife_se(lambda s: float(np.cov(s[:, 0], s[:, 1], ddof=1)[0, 1]),
                          pairs)
    return DecorrelationStats(
        z1=z1, z2=z2, t1=t1,
        joint_tail=joint / trials,
        joint_interval=wilson_interval(joint, trials),
        marginal_tails=(k1 / trials, k2 / trials),
        marginal_intervals=(wilson_interval(k1, trials), wilson_interval(k2, trials)),
        trace_cov=cov, trace_cov_se=cov_se,
        trace_vars=(float(np.var(tr1, ddof=1)), float(np.var(tr2, ddof=1))),
        coupling_dist=None, trials=trials)


def decorrelation_experiment(config: dict) -> DecorrelationStats:
    """Monte Carlo joint/marginal small-lambda tails and trace covariance.

    config keys: n, z1, z2, threshold, eta_tilde, trials, seed; optional
    ensemble (default complex-gaussian) and t1 (Brownian flow time applied
    to each sample before measuring, default 0).
    """
    trials = int(config["trials"])
    samples = [decorrelation_trial(config, i) for i in range(trials)]
    return decorrelation_stats(config, samples)


# --------------------------------------------------------------------------
# Pathwise coupling
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class CouplingResult:
    z1: complex
    z2: complex
    t1: float
    distances: np.ndarray        # shape (2, k): |lambda_i - mu_i| per shift point
    max_distance: float
    cross_particle: np.ndarray | None
    reflections: int
    rejections: int


def coupling_run(n: int, z1: complex, z2: complex, t1: float, seed: int,
                 k: int = 2, particle_steps: int = 1024,
                 share_drivers: bool = False) -> CouplingResult:
    """Matrix-driven spectra versus independently-driven particle paths.

    Both start from the singular spectra of the same initial sample X0 - z_l;
    the matrix flow advances X0 by one exact Gaussian macro-step to time t1,
    while each particle path integrates the mirrored DBM with its own
    independent Brownian drivers.  Reported distances are
    |lambda_i^{z_l}(t1) - mu_i^{(l)}(t1)| for i = 1..k.

    With share_drivers=True the two particle paths consume identical
    increments (an exact-coupling testing device): at z1 == z2 they coincide
    bitwise and the cross-particle distances vanish.
    """
    if t1 <= 0.0:
        raise InvalidParameterError("t1 must be positive")
    if not 1 <= k <= n:
        raise InvalidParameterError(f"need 1 <= k <= n, got k={k}")
    X0 = sample_iid(n, EntryDistribution("complex-gaussian"), seed=mix64(seed, 0))
    flow = run_matrix_flow_pair(X0, z1, z2, t1, steps=1, seed=mix64(seed, 1),
                                want_overlaps=False)
    stats = {"reflections": 0, "rejections": 0}
    rng_a = rng_from(mix64(seed, 2))
    rng_b = rng_from(mix64(seed, 2 if share_drivers else 3))
    mus = []
    for z, rng in ((z1, rng_a), (z2, rng_b)):
        s0 = singular_spectrum(X0, z)
        st = ParticleState(n=n, alpha=0.0, lambdas=s0.lambdas, t=0.0)
        mus.append(run_particle_path(st, t1, particle_steps, rng, stats).lambdas)
    d = np.array([
        np.abs(flow.final1[:k] - mus[0][:k]),
        np.abs(flow.final2[:k] - mus[1][:k]),
    ])
    cross = np.abs(mus[0][:k] - mus[1][:k]) if share_drivers else None
    return CouplingResult(z1=z1, z2=z2, t1=t1, distances=d,
                          max_distance=float(np.max(d)), cross_particle=cross,
                          reflections=stats["reflections"],
                          rejections=stats["rejections"])
