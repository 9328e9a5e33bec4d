"""Scalar Dyson equation for the hermitized model and derived quantities.

The 2x2 block-representative M^z(w) = [[m, -z u], [-zbar u, m]] is determined
by the scalar equation

    -1/m = w + m - |z|^2/(w + m),        Im m * Im w > 0,

equivalently the cubic  m^3 + 2w m^2 + (w^2 + 1 - |z|^2) m + w = 0, with
u = m/(w + m).  The self-consistent symmetrized singular-value density is
rho^z(E) = Im m^z(E + i0)/pi.  Root selection uses homotopy continuation:
at eta = 10 the physical branch is isolated near -1/w, and it is tracked
down the imaginary direction in geometrically spaced steps with Newton
polishing (direct Cardano root-filtering is kept in tests as a cross-check).

Stability eigenvalues of the underlying 4-dimensional block-constant sector:

    beta   = 1 - m^2 - |z|^2 u^2
    beta_* = 1 + m^2 - |z|^2 u^2 = w/(w + m)   (exact identity)

and the cusp parameter sigma = <(sgn(Re U) Im U / rho)^3> with
U = (A + i)/|A + i|, A = (Im M)^{-1/2} (Re M) (Im M)^{-1/2}; on the
imaginary axis sigma vanishes identically by symmetry.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.optimize import brentq

from .errors import (InvalidParameterError, NearSingularWarning, OutOfRangeError,
                     SolverFailureError)

_ETA_START = 10.0
_ETA_RATIO = 0.85
_RHO_FLOOR = 1e-8          # density threshold locating the spectral gap
_ETA_BOUNDARY = 1e-10      # imaginary offset representing E + i0


# ---------------------------------------------------------------------------
# root tracking


def _cubic(m, w, z2):
    return ((m + 2.0 * w) * m + (w * w + 1.0 - z2)) * m + w


def _cubic_prime(m, w, z2):
    return (3.0 * m + 4.0 * w) * m + (w * w + 1.0 - z2)


def cubic_roots(z: complex, w: complex) -> np.ndarray:
    """All three roots of the scalar equation's cubic (test oracle)."""
    z2 = abs(z) ** 2
    return np.roots([1.0, 2.0 * w, w * w + 1.0 - z2, w])


def _newton_levels(z2, E, etas, m=None):
    """Track the physical root along w = E + i*eta for decreasing etas."""
    E = np.asarray(E, dtype=complex)
    if m is None:
        m = -1.0 / (E + 1j * etas[0])
    for eta in etas:
        w = E + 1j * eta
        for _ in range(40):
            p = _cubic(m, w, z2)
            dp = _cubic_prime(m, w, z2)
            step = p / dp
            m = m - step
            if np.all(np.abs(step) <= 1e-15 * (1.0 + np.abs(m))):
                break
    return m


def _polish_direct(m, w, z2, iters=6):
    """Newton on F(m) = 1/m + m + w - |z|^2/(w+m); minimizes the reported
    residual of the scalar equation itself (the cubic residual scales
    differently)."""
    for _ in range(iters):
        wm = w + m
        F = 1.0 / m + m + w - z2 / wm
        dF = -1.0 / (m * m) + 1.0 + z2 / (wm * wm)
        good = np.abs(dF) > 1e-8
        step = np.where(good, F / np.where(good, dF, 1.0), 0.0)
        m = m - step
    return m


def _eta_schedule(eta_target, eta_start=_ETA_START):
    if eta_target >= eta_start:
        return np.array([eta_target])
    count = max(2, int(math.ceil(math.log(eta_start / eta_target)
                                 / -math.log(_ETA_RATIO))) + 1)
    return np.geomspace(eta_start, eta_target, count)


def _m_array(z: complex, E, eta: float) -> np.ndarray:
    """Physical m^z(E + i eta) for an array of real parts E (vectorized)."""
    z2 = abs(z) ** 2
    etas = _eta_schedule(eta)
    m = _newton_levels(z2, E, etas)
    m = _polish_direct(m, np.asarray(E, dtype=complex) + 1j * eta, z2)
    return m


def _residual(m, w, z2):
    return np.abs(1.0 / m + m + w - z2 / (w + m))


# ---------------------------------------------------------------------------
# public solutions


@dataclass
class MdeSolution:
    z: complex
    w: complex
    m: complex
    u: complex
    M: np.ndarray            # the 2x2 block representative
    residual: float
    beta: complex
    beta_star: complex

    @property
    def rho(self) -> float:
        """Density value Im m / pi at this w."""
        return float(np.imag(self.m)) / math.pi


def _package(z: complex, w: complex, m: complex) -> MdeSolution:
    z2 = abs(z) ** 2
    u = m / (w + m)
    M = np.array([[m, -z * u], [-np.conj(z) * u, m]], dtype=complex)
    beta = 1.0 - m * m - z2 * u * u
    beta_star = 1.0 + m * m - z2 * u * u
    return MdeSolution(z=z, w=w, m=complex(m), u=complex(u), M=M,
                       residual=float(_residual(m, w, z2)),
                       beta=complex(beta), beta_star=complex(beta_star))


def solve_mde(z: complex, w: complex) -> MdeSolution:
    """Solve the scalar equation at Im w > 0 on the physical branch."""
    eta = float(np.imag(w))
    if not eta > 0:
        raise InvalidParameterError(f"need Im w > 0, got w={w}")
    E = float(np.real(w))
    m = complex(_m_array(z, np.array([E]), eta)[0])
    if not np.imag(m) > 0:
        raise SolverFailureError("continuation left the physical branch "
                                 f"(Im m = {np.imag(m):.3e} <= 0)", z=z,
                                 w=w, m=m)
    sol = _package(z, w, m)
    if eta >= 1e-3 and sol.residual > 1e-12:
        raise SolverFailureError(
            f"residual {sol.residual:.3e} > 1e-12 after polishing", z=z, w=w, m=m)
    return sol


def boundary_m(z: complex, E: float) -> MdeSolution:
    """Boundary value m^z(E + i0), via continuation down to eta = 1e-10.

    The returned residual is the raw value at the tiny regularizing offset;
    cancellation floors make it unreliable below ~1e-13 and it is reported,
    not enforced, here.
    """
    m = complex(_m_array(z, np.array([float(E)]), _ETA_BOUNDARY)[0])
    if np.imag(m) <= 0:
        # Rounding can land exactly on the real axis deep inside a gap; nudge
        # onto the closed upper half plane so rho = 0 rather than negative.
        m = complex(np.real(m), max(np.imag(m), 0.0))
    return _package(z, complex(E, _ETA_BOUNDARY), m)


def rho_boundary(z: complex, E) -> np.ndarray:
    """Vectorized boundary density rho^z(E) = Im m^z(E + i0)/pi."""
    m = _m_array(z, np.asarray(E, dtype=float), _ETA_BOUNDARY)
    return np.maximum(np.imag(m), 0.0) / math.pi


# ---------------------------------------------------------------------------
# density profile, gap, quantiles, fluctuation scale


@dataclass
class DensityProfile:
    z: complex
    grid: np.ndarray
    rho: np.ndarray
    gap: float
    edge: float


def gap_edge(z: complex, search_max: float = None) -> float:
    """Half-width Delta/2 of the spectral gap around 0 (0 when |z| <= 1)."""
    if abs(z) <= 1.0:
        return 0.0
    if rho_boundary(z, np.array([0.0]))[0] > _RHO_FLOOR:
        return 0.0
    hi = search_max if search_max is not None else abs(z) + 3.0
    grid = np.linspace(0.0, hi, 257)
    vals = rho_boundary(z, grid)
    above = np.nonzero(vals > _RHO_FLOOR)[0]
    if above.size == 0:
        raise SolverFailureError("no positive density found while bracketing "
                                 "the gap edge", z=z)
    lo, up = grid[above[0] - 1], grid[above[0]]
    for _ in range(60):
        mid = 0.5 * (lo + up)
        if rho_boundary(z, np.array([mid]))[0] > _RHO_FLOOR:
            up = mid
        else:
            lo = mid
    return 0.5 * (lo + up)


def density_profile(z: complex, E_max: float, points: int) -> DensityProfile:
    """rho^z on a symmetric grid, with the gap located when |z| > 1."""
    if points < 16:
        raise InvalidParameterError(f"need points >= 16, got {points}")
    grid = np.linspace(-E_max, E_max, points)
    rho = rho_boundary(z, grid)
    edge = gap_edge(z, search_max=max(E_max, abs(z) + 3.0)) if abs(z) > 1.0 else 0.0
    return DensityProfile(z=z, grid=grid, rho=rho, gap=2.0 * edge, edge=edge)


_GL_NODES, _GL_WEIGHTS = leggauss(64)


def _mass(z: complex, a: float, b: float, tol: float = 1e-11) -> tuple[float, float]:
    """Integral of rho over [a, b]: composite Gauss-Legendre, doubled until
    converged (vectorized over nodes, so each refinement costs one
    continuation sweep)."""
    if b <= a:
        return 0.0, 0.0
    prev = None
    err = 0.0
    val = 0.0
    for segs in (1, 2, 4, 8, 16, 32, 64):
        edges = np.linspace(a, b, segs + 1)
        half = 0.5 * (edges[1] - edges[0])
        mids = 0.5 * (edges[1:] + edges[:-1])
        xs = (mids[:, None] + half * _GL_NODES[None, :]).ravel()
        ws = np.tile(half * _GL_WEIGHTS, segs)
        val = float(ws @ rho_boundary(z, xs))
        if prev is not None:
            err = abs(val - prev)
            if err <= max(tol, 1e-13 * abs(val)):
                break
        prev = val
    return val, err


def total_mass(z: complex) -> float:
    """int rho^z(E) dE over the real line (1 up to quadrature error).

    Integrates over the exact support [gap edge, upper edge] so the
    composite rule does not straddle the square-root band edges.
    """
    a = gap_edge(z) if abs(z) > 1.0 else 0.0
    val, _ = _mass(z, a, support_edge(z))
    return 2.0 * val


@dataclass
class QuantileTable:
    n: int
    gammas: np.ndarray       # gamma_i for i = 1..k


def support_edge(z: complex) -> float:
    """Upper edge of supp(rho^z), via bisection on rho <= threshold."""
    hi = abs(z) + 3.0
    grid = np.linspace(0.0, hi, 513)
    vals = rho_boundary(z, grid)
    above = np.nonzero(vals > _RHO_FLOOR)[0]
    if above.size == 0:
        raise SolverFailureError("empty support grid", z=z)
    lo, up = grid[above[-1]], grid[min(above[-1] + 1, 512)]
    for _ in range(60):
        mid = 0.5 * (lo + up)
        if rho_boundary(z, np.array([mid]))[0] > _RHO_FLOOR:
            lo = mid
        else:
            up = mid
    return 0.5 * (lo + up)


def quantiles(z: complex, n: int, k: int) -> QuantileTable:
    """gamma_i with integral_0^{gamma_i} rho = i/(2n), for i = 1..k."""
    if not 1 <= k <= n:
        raise OutOfRangeError(f"need 1 <= k <= n, got k={k}, n={n}; the "
                              "half-mass quantile budget i/(2n) <= 1/2 "
                              "admits no larger index")
    top = support_edge(z)
    gammas = np.empty(k)
    acc = 0.0          # mass accumulated up to prev
    prev = 0.0
    for i in range(1, k + 1):
        target = i / (2.0 * n)
        if i == n:
            gammas[i - 1] = top
            continue

        def F(x):
            return acc + _mass(z, prev, x)[0] - target

        hi = min(prev + max(4.0 * (top - prev) / (n - i + 1), 1e-6), top)
        while F(hi) < 0.0 and hi < top:
            hi = min(prev + 2.0 * (hi - prev), top)
        gamma = brentq(F, prev, hi, xtol=1e-14, rtol=8.9e-16)
        gammas[i - 1] = gamma
        acc += _mass(z, prev, gamma)[0]
        prev = gamma
    return QuantileTable(n=n, gammas=gammas)


def fluctuation_scale(z: complex, E: float, n: int) -> float:
    """Local spacing scale eta_f.

    In the support: integral_{E-eta_f}^{E+eta_f} rho = 1/(2n).  Inside a gap:
    eta_f = min(n^{-3/4}, Delta^{1/9} n^{-2/3}).
    """
    if n < 2:
        raise InvalidParameterError(f"need n >= 2, got {n}")
    edge = gap_edge(z) if abs(z) > 1.0 else 0.0
    if edge > 0.0 and abs(E) < edge:
        delta = 2.0 * edge
        return min(n ** -0.75, delta ** (1.0 / 9.0) * n ** (-2.0 / 3.0))
    target = 1.0 / (2.0 * n)

    def g(eta):
        return _mass(z, E - eta, E + eta)[0] - target

    rho_here = float(rho_boundary(z, np.array([E]))[0])
    hi = 1.0 / (4.0 * n * rho_here) if rho_here > 1e-12 else n ** -0.75
    while g(hi) < 0.0:
        hi *= 2.0
        if hi > abs(z) + 4.0:
            raise SolverFailureError("fluctuation scale bracket exploded", z=z)
    return brentq(g, 0.0, hi, xtol=1e-16, rtol=8.9e-16)


# ---------------------------------------------------------------------------
# stability parameter


def _herm_2x2(p: float, c: complex) -> np.ndarray:
    return np.array([[p, c], [np.conj(c), p]], dtype=complex)


def stability_sigma(solution: MdeSolution) -> float:
    """Cusp parameter sigma = <(sgn(Re U) Im U / rho)^3>.

    Reduces on the block-constant sector to the 2x2 representative: with
    a_k the eigenvalues of (Im M)^{-1/2} (Re M) (Im M)^{-1/2},

        sigma = (1/2) sum_k sgn(a_k) / (rho * sqrt(1 + a_k^2))^3 ,

    rho = Im m / pi.  sgn(0) = 0, which reproduces sigma(i eta) = 0 exactly.
    """
    m, u, z = solution.m, solution.u, solution.z
    im_m = float(np.imag(m))
    if im_m <= 1e-14:
        warnings.warn("Im m <= 1e-14: stability reduction is near-singular",
                      NearSingularWarning, stacklevel=2)
    re_M = _herm_2x2(float(np.real(m)), -z * np.real(u))
    im_M = _herm_2x2(im_m, -z * np.imag(u))
    d, S = np.linalg.eigh(im_M)
    inv_sqrt = (S * (1.0 / np.sqrt(d))) @ S.conj().T
    A = inv_sqrt @ re_M @ inv_sqrt
    a = np.linalg.eigvalsh(A)
    rho = im_m / math.pi
    contrib = np.sign(a) / (rho * np.sqrt(1.0 + a * a)) ** 3
    return float(0.5 * np.sum(contrib))
