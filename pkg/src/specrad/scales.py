"""Shared deterministic scales for the spectral-radius asymptotics.

gamma_n = log n - 2 log log n - log(2 pi) is the centering sequence of the
three-term expansion of the spectral radius,

    rho(X) ~ 1 + sqrt(gamma_n / 4n) + G_n / sqrt(4 n gamma_n),

with G_n asymptotically Gumbel.  gamma_n > 0 only for n >= 163, so every
consumer validates positivity explicitly instead of trusting a small-n cutoff.
"""
from __future__ import annotations

import math

from .errors import InvalidParameterError


def gamma_n(n: int) -> float:
    """Centering constant log n - 2 log log n - log 2pi (may be negative)."""
    if n < 3:
        raise InvalidParameterError(f"gamma_n needs n >= 3, got {n}")
    ln = math.log(n)
    return ln - 2.0 * math.log(ln) - math.log(2.0 * math.pi)


def require_positive_gamma(n: int) -> float:
    g = gamma_n(n)
    if g <= 0.0:
        raise InvalidParameterError(
            f"gamma_n({n}) = {g:.6g} <= 0; the edge scales are defined only "
            "once log n dominates 2 log log n + log 2pi (n >= 163)")
    return g


def edge_center(n: int) -> float:
    """Deterministic radius 1 + sqrt(gamma_n / 4n) around which rho(X) lives."""
    g = require_positive_gamma(n)
    return 1.0 + math.sqrt(g / (4.0 * n))


def gumbel_scale(n: int) -> float:
    """Fluctuation normalization sqrt(4 n gamma_n)."""
    g = require_positive_gamma(n)
    return math.sqrt(4.0 * n * g)
