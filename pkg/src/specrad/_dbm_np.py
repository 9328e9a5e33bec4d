"""NumPy backend for the mirrored singular-value Dyson Brownian motion.

The particle set is {lambda_i} with implicit mirrors {-lambda_i}; the drift on
particle i collects the pairwise repulsion from both copies of every other
particle plus the own-mirror term:

    drift_i = (1/2n) [ sum_{j != i} 1/(l_i - l_j) + sum_j 1/(l_i + l_j) ]

(the j = i term of the second sum is exactly the own-mirror 1/(2 l_i)).
"""
from __future__ import annotations

import numpy as np

COLLISION_SPACING = 1e-12
REFLECT_FLOOR = 1e-14


def drift(lam: np.ndarray) -> np.ndarray:
    lam = np.asarray(lam, dtype=float)
    n = lam.size
    diff = lam[:, None] - lam[None, :]
    np.fill_diagonal(diff, np.inf)
    ssum = lam[:, None] + lam[None, :]
    return (np.sum(1.0 / diff, axis=1) + np.sum(1.0 / ssum, axis=1)) / (2.0 * n)


def em_path(lam: np.ndarray, dt: float, incr: np.ndarray):
    """Run Euler-Maruyama steps lam += drift*dt + incr[k]/sqrt(2n).

    incr has shape (steps, n); each row is a Brownian increment of variance
    dt per particle.  After each step particles are reflected at
    REFLECT_FLOOR (counted) and re-sorted.  If the sorted spacing dips below
    COLLISION_SPACING the offending step is rolled back and the function
    returns early.

    Returns (lam_out, steps_done, reflections); steps_done < len(incr)
    signals a collision at step index steps_done.
    """
    lam = np.array(lam, dtype=float)
    incr = np.asarray(incr, dtype=float)
    n = lam.size
    root = 1.0 / np.sqrt(2.0 * n)
    reflections = 0
    for k in range(incr.shape[0]):
        prev = lam
        lam = lam + drift(lam) * dt + incr[k] * root
        low = lam < REFLECT_FLOOR
        if np.any(low):
            reflections += int(np.count_nonzero(low))
            lam[low] = REFLECT_FLOOR
        lam.sort()
        if n > 1 and np.min(np.diff(lam)) < COLLISION_SPACING:
            return prev, k, reflections
        if n == 1 and lam[0] < COLLISION_SPACING:
            return prev, k, reflections
    return lam, incr.shape[0], reflections
