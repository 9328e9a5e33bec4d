"""Random matrix ensembles with entry variance 1/n, and matrix-level flows.

All entry laws chi are normalized so E chi = 0, E|chi|^2 = 1, E chi^2 = 0;
matrix entries are chi / sqrt(n).  Flows are applied as exact Gaussian-mixture
one-shot updates (no Euler discretization):

    brownian:            X_t = X_0 + sqrt(t) * U
    ornstein-uhlenbeck:  X_t = exp(-t/2) * X_0 + sqrt(1 - exp(-t)) * U

with U a fresh Ginibre matrix, so the OU flow maps Ginibre to Ginibre exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigurationError, InvalidDimensionError, InvalidParameterError
from .seeding import rng_from

ENTRY_KINDS = ("complex-gaussian", "symmetric-complex-bernoulli", "uniform-complex-disk")
FLOW_KINDS = ("brownian", "ornstein-uhlenbeck")


@dataclass(frozen=True)
class EntryDistribution:
    kind: str

    def __post_init__(self):
        if self.kind not in ENTRY_KINDS:
            raise ConfigurationError(
                f"unknown entry distribution {self.kind!r}; choose from {ENTRY_KINDS}")


@dataclass(frozen=True)
class FlowKind:
    kind: str
    dt: float = 1e-3

    def __post_init__(self):
        if self.kind not in FLOW_KINDS:
            raise ConfigurationError(
                f"unknown flow kind {self.kind!r}; choose from {FLOW_KINDS}")
        if not self.dt > 0:
            raise InvalidParameterError(f"flow dt must be positive, got {self.dt}")


@dataclass
class MatrixSample:
    n: int
    entries: np.ndarray
    ensemble: str
    seed: int
    flow_time: float = 0.0

    def __post_init__(self):
        if self.entries.shape != (self.n, self.n):
            raise InvalidDimensionError(
                f"entries shape {self.entries.shape} != ({self.n}, {self.n})")


def _chi(kind: str, rng: np.random.Generator, shape) -> np.ndarray:
    """Draw chi with E chi = 0, E|chi|^2 = 1, E chi^2 = 0."""
    if kind in ("ginibre", "complex-gaussian"):
        re = rng.standard_normal(shape)
        im = rng.standard_normal(shape)
        return (re + 1j * im) / math.sqrt(2.0)
    if kind == "symmetric-complex-bernoulli":
        s1 = 2.0 * rng.integers(0, 2, size=shape) - 1.0
        s2 = 2.0 * rng.integers(0, 2, size=shape) - 1.0
        return (s1 + 1j * s2) / math.sqrt(2.0)
    if kind == "uniform-complex-disk":
        # |chi| = sqrt(2 U) puts chi uniform on the disk of radius sqrt(2),
        # which has E|chi|^2 = 1.
        radius = np.sqrt(2.0 * rng.random(shape))
        phase = np.exp(2j * np.pi * rng.random(shape))
        return radius * phase
    raise ConfigurationError(f"unknown entry distribution {kind!r}")


def sample_ginibre(n: int, seed: int) -> MatrixSample:
    """n x n complex Ginibre matrix: i.i.d. CN(0, 1/n) entries."""
    if n < 1:
        raise InvalidDimensionError(f"need n >= 1, got {n}")
    rng = rng_from(seed)
    entries = _chi("ginibre", rng, (n, n)) / math.sqrt(n)
    return MatrixSample(n=n, entries=entries, ensemble="ginibre", seed=int(seed))


def sample_iid(n: int, dist: EntryDistribution, seed: int) -> MatrixSample:
    """n x n matrix of i.i.d. chi/sqrt(n) entries for the chosen chi."""
    if n < 1:
        raise InvalidDimensionError(f"need n >= 1, got {n}")
    rng = rng_from(seed)
    entries = _chi(dist.kind, rng, (n, n)) / math.sqrt(n)
    return MatrixSample(n=n, entries=entries, ensemble=dist.kind, seed=int(seed))


def evolve(X: MatrixSample, flow: FlowKind, t: float, seed: int) -> MatrixSample:
    """Advance X by time t under the requested flow (exact one-shot update)."""
    if t < 0:
        raise InvalidParameterError(f"flow time must be nonnegative, got {t}")
    if t == 0:
        return replace(X, entries=X.entries.copy())
    fresh = sample_ginibre(X.n, seed).entries
    if flow.kind == "brownian":
        entries = X.entries + math.sqrt(t) * fresh
    else:  # ornstein-uhlenbeck
        entries = math.exp(-0.5 * t) * X.entries + math.sqrt(-math.expm1(-t)) * fresh
    return MatrixSample(n=X.n, entries=entries, ensemble=X.ensemble,
                        seed=X.seed, flow_time=X.flow_time + t)
