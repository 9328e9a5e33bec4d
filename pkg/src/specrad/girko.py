"""Radial C^2 test functions and numerical evaluation of the hermitization
identity

    sum_i f(|sigma_i|) = (1/2 pi) int Delta f(z) * sum_i log lambda_i^z d^2z

for compactly supported radial f, where sigma_i are the eigenvalues of X and
lambda_i^z the singular values of X - z.  The right side is also produced in
eta-split form: the eta-integrals of Im Tr G(i eta) are elementary
(int_a^b eta/(lambda^2+eta^2) d eta = (1/2) log((lambda^2+b^2)/(lambda^2+a^2))),
so the split reproduces the log-determinant form exactly up to rounding.

Bridges between plateau and zero use the C^2 quintic smoothstep
S(t) = 6t^5 - 15t^4 + 10t^3 on each transition band.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from numpy.polynomial.legendre import leggauss

from .ensembles import MatrixSample
from .errors import InvalidParameterError, NumericalFailureError
from .hermitization import CLAMP_REL
from .scales import require_positive_gamma

#: sup_t |S''(t)| for the quintic smoothstep: 10/sqrt(3).
SMOOTHSTEP_D2_MAX = 10.0 / math.sqrt(3.0)


def _S(t):
    return ((6.0 * t - 15.0) * t + 10.0) * t ** 3


def _S1(t):
    return 30.0 * t * t * (1.0 - t) ** 2


def _S2(t):
    return 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t)


@dataclass(frozen=True)
class _Piece:
    a: float
    b: float
    kind: str          # "zero" | "up" | "plateau" | "down"


@dataclass
class RadialTestFunction:
    kind: str                      # "annulus-f1" | "outer-f2" | "custom"
    n: Optional[int]
    L: float
    l: float
    pieces: list = field(default_factory=list)
    tau: float = 0.05
    cn: Optional[float] = None

    @property
    def support(self) -> tuple[float, float]:
        live = [p for p in self.pieces if p.kind != "zero"]
        return live[0].a, live[-1].b

    @property
    def bridge_bands(self) -> list[tuple[float, float]]:
        """Bands where f is non-constant (where Delta f can be nonzero)."""
        return [(p.a, p.b) for p in self.pieces if p.kind in ("up", "down")]

    def _locate(self, r):
        edges = np.array([p.a for p in self.pieces[1:]])
        return np.searchsorted(edges, r, side="right")

    def _eval(self, r, order: int):
        r = np.asarray(r, dtype=float)
        idx = self._locate(r)
        out = np.zeros_like(r)
        for j, p in enumerate(self.pieces):
            sel = idx == j
            if not np.any(sel):
                continue
            if p.kind == "zero":
                continue
            if p.kind == "plateau":
                if order == 0:
                    out[sel] = 1.0
                continue
            h = p.b - p.a
            if p.kind == "up":
                t = (r[sel] - p.a) / h
                sgn = 1.0
            else:
                t = (p.b - r[sel]) / h
                sgn = -1.0
            if order == 0:
                out[sel] = _S(t)
            elif order == 1:
                out[sel] = sgn * _S1(t) / h
            else:
                out[sel] = _S2(t) / h ** 2
        return out

    def __call__(self, r):
        return self._eval(r, 0)

    def deriv1(self, r):
        return self._eval(r, 1)

    def deriv2(self, r):
        return self._eval(r, 2)


def _assemble(kind, n, pieces, L, l, tau=0.05, cn=None) -> RadialTestFunction:
    # Validate monotone band edges.
    for prev, cur in zip(pieces, pieces[1:]):
        if cur.a < prev.a:
            raise InvalidParameterError(
                f"band edges out of order for {kind}: {[(p.a, p.b) for p in pieces]}")
    return RadialTestFunction(kind=kind, n=n, L=L, l=l, pieces=pieces,
                              tau=tau, cn=cn)


def make_test_function(kind: str, n: Optional[int] = None, *, L: float = None,
                       l: float = None, tau: float = 0.05, cn: float = None,
                       plateau: tuple[float, float] = None,
                       bridge: float = None) -> RadialTestFunction:
    """Build the annulus (f1), outer (f2), or a custom radial cutoff.

    Defaults follow the edge scales: L = 1 + sqrt(gamma_n/4n),
    l = cn/sqrt(n log n) with cn = (log n)^(1/4), and for f2 an outer plateau
    radius R = 1 + n^(-1/2+tau).  Explicit L/l (or plateau/bridge for
    "custom") bypass the n-derived values.
    """
    if kind == "custom":
        if plateau is None or bridge is None:
            raise InvalidParameterError("custom kind needs plateau=(a,b) and bridge=h")
        a, b = plateau
        h = bridge
        if not (0 <= a < b and h > 0):
            raise InvalidParameterError(f"bad custom plateau {plateau}, bridge {h}")
        pieces = []
        if a > 0:
            if a - h < 0:
                raise InvalidParameterError("inner bridge extends below r=0")
            pieces += [_Piece(0.0, a - h, "zero"), _Piece(a - h, a, "up")]
        pieces += [_Piece(a if a > 0 else 0.0, b, "plateau"),
                   _Piece(b, b + h, "down"), _Piece(b + h, math.inf, "zero")]
        return _assemble(kind, n, pieces, L=0.5 * (a + b), l=h)

    if L is None or l is None:
        if n is None:
            raise InvalidParameterError(f"{kind} needs n unless L and l are given")
        g = require_positive_gamma(n)
        if L is None:
            L = 1.0 + math.sqrt(g / (4.0 * n))
        if l is None:
            if cn is None:
                cn = math.log(n) ** 0.25
            l = cn / math.sqrt(n * math.log(n))
    if not (l > 0 and L > l):
        raise InvalidParameterError(f"need 0 < l < L, got L={L}, l={l}")
    h = l / 5.0

    if kind == "annulus-f1":
        pieces = [_Piece(0.0, L - l, "zero"),
                  _Piece(L - l, L - 4 * l / 5, "up"),
                  _Piece(L - 4 * l / 5, L + 4 * l / 5, "plateau"),
                  _Piece(L + 4 * l / 5, L + l, "down"),
                  _Piece(L + l, math.inf, "zero")]
        return _assemble(kind, n, pieces, L, l, tau, cn)

    if kind == "outer-f2":
        if n is None:
            raise InvalidParameterError("outer-f2 needs n for its outer radius")
        R = 1.0 + n ** (-0.5 + tau)
        if L + l > R:
            raise InvalidParameterError(
                f"inner plateau edge L+l = {L + l:.6g} exceeds outer radius "
                f"R = {R:.6g}; increase tau")
        pieces = [_Piece(0.0, L + 4 * l / 5, "zero"),
                  _Piece(L + 4 * l / 5, L + l, "up"),
                  _Piece(L + l, R, "plateau"),
                  _Piece(R, R + h, "down"),
                  _Piece(R + h, math.inf, "zero")]
        return _assemble(kind, n, pieces, L, l, tau, cn)

    raise InvalidParameterError(f"unknown test-function kind {kind!r}")


def laplacian(f: RadialTestFunction, r):
    """Delta f at radius r for radial f: f''(r) + f'(r)/r (closed form)."""
    scalar = np.isscalar(r)
    r = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(r < 0):
        raise InvalidParameterError("radius must be nonnegative")
    out = np.empty_like(r)
    zero = r == 0.0
    if np.any(zero):
        if f.kind != "custom":
            raise InvalidParameterError("r = 0 only defined for custom kind")
        out[zero] = 2.0 * f.deriv2(np.zeros(int(np.count_nonzero(zero))))
    nz = ~zero
    out[nz] = f.deriv2(r[nz]) + f.deriv1(r[nz]) / r[nz]
    return float(out[0]) if scalar else out


_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _gl(nn: int):
    if nn not in _GL_CACHE:
        _GL_CACHE[nn] = leggauss(nn)
    return _GL_CACHE[nn]


def _band_nodes(f: RadialTestFunction, radial_nodes: int):
    """Radial Gauss-Legendre nodes/weights tiled over the bridge bands."""
    x, wts = _gl(radial_nodes)
    rs, ws = [], []
    for a, b in f.bridge_bands:
        half = 0.5 * (b - a)
        rs.append(0.5 * (a + b) + half * x)
        ws.append(half * wts)
    return np.concatenate(rs), np.concatenate(ws)


def laplacian_integrals(f: RadialTestFunction, radial_nodes: int = 256):
    """(int Delta f d^2z, int |Delta f| d^2z) by per-band quadrature."""
    r, w = _band_nodes(f, radial_nodes)
    lap = laplacian(f, r)
    signed = 2.0 * math.pi * float(np.sum(w * lap * r))
    absolute = 2.0 * math.pi * float(np.sum(w * np.abs(lap) * r))
    return signed, absolute


def girko_lhs(X: MatrixSample, f: RadialTestFunction) -> float:
    """sum_i f(|sigma_i|) over the eigenvalues of X."""
    try:
        sig = np.linalg.eigvals(X.entries)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError("eigenvalue solve failed",
                                    seed=X.seed) from exc
    return float(np.sum(f(np.abs(sig))))


@dataclass
class QuadratureSpec:
    radial_nodes: int = 64
    angular_nodes: int = 128
    refine_tol: float = 1e-3
    max_refine: int = 3


@dataclass
class GirkoEstimate:
    lhs: float
    rhs_logdet: float
    rhs_split: tuple[float, float]
    cap_term: float          # (1/4pi) int Delta f * log|det(H - iT)|
    quad_error: float
    nodes: int
    clamped: int
    eta0: float
    T: float


def _logdet_sums(X: MatrixSample, zs: np.ndarray, eta0: float, T: float,
                 chunk: int = 2048):
    """Per z-node: (sum log lambda, eta-integral pieces), one SVD per node
    (batched through the stacked-SVD gufunc in chunks)."""
    n = X.n
    eye = np.eye(n)
    s_log = np.empty(len(zs))
    s_i0 = np.empty(len(zs))
    s_irest = np.empty(len(zs))
    s_cap = np.empty(len(zs))
    clamped = 0
    for j0 in range(0, len(zs), chunk):
        zc = zs[j0:j0 + chunk]
        stack = X.entries[None, :, :] - zc[:, None, None] * eye[None, :, :]
        lam = np.linalg.svd(stack, compute_uv=False)   # descending per row
        floor = CLAMP_REL * np.where(lam[:, 0] > 0, lam[:, 0], 1.0)
        clamped += int(np.count_nonzero(lam < floor[:, None]))
        lam = np.maximum(lam, floor[:, None])
        lam2 = lam * lam
        sl = j0 + np.arange(len(zc))
        s_log[sl] = np.sum(np.log(lam), axis=1)
        s_i0[sl] = np.sum(np.log1p(eta0 * eta0 / lam2), axis=1)
        s_irest[sl] = np.sum(np.log((lam2 + T * T) / (lam2 + eta0 * eta0)), axis=1)
        s_cap[sl] = np.sum(np.log(lam2 + T * T), axis=1)
    return s_log, s_i0, s_irest, s_cap, clamped


def girko_rhs(X: MatrixSample, f: RadialTestFunction, form: str = "logdet",
              quad: QuadratureSpec = None, eta0: float = None,
              T: float = 1e6) -> GirkoEstimate:
    """Quadrature evaluation of the identity's right side (both forms).

    The polar product rule uses Gauss-Legendre radial nodes on each bridge
    band and a uniform midpoint rule in angle (spectrally accurate for the
    periodic integrand); radial nodes double until the estimate moves less
    than quad.refine_tol relative.
    """
    if form not in ("logdet", "eta-split"):
        raise InvalidParameterError(f"unknown form {form!r}")
    quad = quad or QuadratureSpec()
    if eta0 is None:
        eta0 = X.n ** -0.9
    lhs = girko_lhs(X, f)

    prev = None
    est = i0 = irest = cap = 0.0
    quad_err = math.inf
    total_nodes = 0
    clamped = 0
    radial = quad.radial_nodes
    M = quad.angular_nodes
    for _ in range(quad.max_refine + 1):
        thetas = 2.0 * math.pi * (np.arange(M) + 0.5) / M
        phases = np.exp(1j * thetas)
        w_theta = 2.0 * math.pi / M
        r, wr = _band_nodes(f, radial)
        lap = laplacian(f, r)
        zs = (r[:, None] * phases[None, :]).ravel()
        w2d = (wr * lap * r)[:, None].repeat(M, axis=1).ravel() * w_theta
        s_log, s_i0, s_irest, s_cap, nc = _logdet_sums(X, zs, eta0, T)
        total_nodes = len(zs)
        clamped = nc
        est = float(w2d @ s_log) / (2.0 * math.pi)
        i0 = -float(w2d @ s_i0) / (4.0 * math.pi)
        irest = -float(w2d @ s_irest) / (4.0 * math.pi)
        cap = float(w2d @ s_cap) / (4.0 * math.pi)
        if prev is not None:
            quad_err = abs(est - prev)
            if quad_err <= quad.refine_tol * max(1.0, abs(est)):
                break
        prev = est
        # The integrand's angular roughness (eigenvalue moduli near the
        # bands) dominates well before the radial rule saturates, so both
        # directions refine together.
        radial *= 2
        M *= 2
    return GirkoEstimate(lhs=lhs, rhs_logdet=est, rhs_split=(i0, irest),
                         cap_term=cap,
                         quad_error=quad_err if prev is not None else 0.0,
                         nodes=total_nodes, clamped=clamped, eta0=eta0, T=T)


def small_eta_surrogate(lambdas: np.ndarray, eta0: float, eta_tilde: float) -> float:
    """Replacement value (eta0^2/2) * sum over all +-lambda of 1/(lambda^2 + eta_tilde^2)."""
    if not 0 < eta0 < eta_tilde:
        raise InvalidParameterError(
            f"need 0 < eta0 < eta_tilde, got eta0={eta0}, eta_tilde={eta_tilde}")
    lam = np.asarray(lambdas, dtype=float)
    return float(eta0 * eta0 * np.sum(1.0 / (lam * lam + eta_tilde * eta_tilde)))
