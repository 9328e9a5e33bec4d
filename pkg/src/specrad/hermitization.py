"""Hermitization of X - z and resolvent functionals of H^z.

For an n x n matrix X and shift z, the 2n x 2n Hermitian matrix

    H^z = [[0, X - z], [(X - z)^*, 0]]

has spectrum {+-lambda_i^z} where lambda_i^z are the singular values of X - z.
Its resolvent G^z(w) = (H^z - w)^{-1} is assembled spectrally from the SVD:
the eigenvector of H^z for +-lambda_i is (u_i, +-v_i)/sqrt(2), so with
g_+- = 1/(+-lambda_i - w) the blocks are

    G_11 = U diag((g_+ + g_-)/2) U*      G_12 = U diag((g_+ - g_-)/2) V*
    G_21 = V diag((g_+ - g_-)/2) U*      G_22 = V diag((g_+ + g_-)/2) V*.

On the imaginary axis w = i eta this gives the exact elementary forms
(g_+ + g_-)/2 = i eta/(lambda^2 + eta^2) (purely imaginary) and
(g_+ - g_-)/2 = lambda/(lambda^2 + eta^2).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .ensembles import MatrixSample
from .errors import (InvalidInputError, InvalidParameterError, MissingDataError,
                     NumericalFailureError)

#: Relative floor (times lambda_max) applied before reciprocal-like uses of
#: singular values; raw values are always reported alongside.
CLAMP_REL = 1e-14


@dataclass
class SingularSpectrum:
    z: complex
    n: int
    lambdas: np.ndarray                      # ascending, nonnegative
    left_vectors: Optional[np.ndarray] = None    # columns u_i
    right_vectors: Optional[np.ndarray] = None   # columns v_i
    seed: Optional[int] = None

    @property
    def has_vectors(self) -> bool:
        return self.left_vectors is not None and self.right_vectors is not None


@dataclass
class ResolventFunctionals:
    eta: float
    avg_trace: complex     # <G^z(i eta)> = (1/2n) Tr G
    im_trace: float        # Im Tr G^z(i eta)


@dataclass
class OverlapTable:
    k: int
    entries: np.ndarray    # k x k, |<u_i,u_j>|^2 + |<v_i,v_j>|^2


def hermitize(X: MatrixSample, z: complex) -> np.ndarray:
    """The 2n x 2n Hermitian block matrix [[0, X-z], [(X-z)*, 0]]."""
    A = X.entries - z * np.eye(X.n)
    zero = np.zeros((X.n, X.n), dtype=complex)
    return np.block([[zero, A], [A.conj().T, zero]])


def singular_spectrum(X: MatrixSample, z: complex,
                      want_vectors: bool = False) -> SingularSpectrum:
    """Singular values (ascending) of X - z, with optional phase-fixed vectors.

    Phase convention: the largest-modulus component of each right vector is
    rotated to be real positive (u rotated by the same phase), making overlap
    tables reproducible across LAPACK builds.
    """
    A = X.entries - z * np.eye(X.n)
    try:
        if not want_vectors:
            s = np.linalg.svd(A, compute_uv=False)
            return SingularSpectrum(z=z, n=X.n, lambdas=s[::-1].copy(),
                                    seed=X.seed)
        U, s, Vh = np.linalg.svd(A)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError("SVD failed to converge",
                                    seed=X.seed, z=z) from exc
    order = np.arange(X.n - 1, -1, -1)
    U = U[:, order]
    s = s[order].copy()
    V = Vh.conj().T[:, order]
    # Rotate each pair (u_i, v_i) by a common phase; (X-z) v = lambda u is
    # preserved, and v's largest component becomes real positive.
    anchor_rows = np.argmax(np.abs(V), axis=0)
    anchors = V[anchor_rows, np.arange(X.n)]
    mags = np.abs(anchors)
    phases = np.where(mags > 0, anchors / np.where(mags > 0, mags, 1.0), 1.0)
    V = V / phases[np.newaxis, :]
    U = U / phases[np.newaxis, :]
    return SingularSpectrum(z=z, n=X.n, lambdas=s, left_vectors=U,
                            right_vectors=V, seed=X.seed)


def clamp_lambdas(lambdas: np.ndarray) -> tuple[np.ndarray, int]:
    """Clamp singular values below CLAMP_REL * lambda_max; count how many."""
    lam_max = float(lambdas[-1]) if lambdas.size else 0.0
    floor = CLAMP_REL * (lam_max if lam_max > 0 else 1.0)
    clamped = np.maximum(lambdas, floor)
    return clamped, int(np.count_nonzero(lambdas < floor))


def resolvent_trace(spec: SingularSpectrum, eta: float) -> ResolventFunctionals:
    """Im Tr G^z(i eta) = 2 sum_i eta/(lambda_i^2 + eta^2) and the 2n-average."""
    if not eta > 0:
        raise InvalidParameterError(f"eta must be positive, got {eta}")
    lam2 = spec.lambdas ** 2
    im_trace = float(2.0 * np.sum(eta / (lam2 + eta * eta)))
    avg = 1j * im_trace / (2.0 * spec.n)
    return ResolventFunctionals(eta=eta, avg_trace=avg, im_trace=im_trace)


def eta_integral(lambdas: np.ndarray, a: float, b: float) -> np.ndarray:
    """Exact per-eigenvalue integral of eta/(lambda^2 + eta^2) over [a, b].

    Equals (1/2) log((lambda^2 + b^2)/(lambda^2 + a^2)); used by the
    eta-split evaluation of the hermitization identity, where all
    eta-integrals are analytic in lambda.
    """
    lam2 = np.asarray(lambdas) ** 2
    return 0.5 * (np.log(lam2 + b * b) - np.log(lam2 + a * a))


def resolvent_matrix(spec: SingularSpectrum, w: complex) -> np.ndarray:
    """Dense G^z(w) = (H^z - w)^{-1} from the stored SVD (n <= 256 intended)."""
    if not spec.has_vectors:
        raise MissingDataError("resolvent_matrix needs singular vectors; "
                               "recompute the spectrum with want_vectors=True")
    if not np.imag(w) > 0:
        raise InvalidParameterError(f"need Im w > 0, got w={w}")
    lam = spec.lambdas
    g_plus = 1.0 / (lam - w)
    g_minus = 1.0 / (-lam - w)
    a = 0.5 * (g_plus + g_minus)
    b = 0.5 * (g_plus - g_minus)
    U, V = spec.left_vectors, spec.right_vectors
    Ua = U * a
    Ub = U * b
    G11 = Ua @ U.conj().T
    G12 = Ub @ V.conj().T
    G21 = (V * b) @ U.conj().T
    G22 = (V * a) @ V.conj().T
    return np.block([[G11, G12], [G21, G22]])


def overlaps(spec1: SingularSpectrum, spec2: SingularSpectrum,
             k: int) -> OverlapTable:
    """Squared singular-vector overlaps for the k smallest indices.

    entries[i, j] = |<u_i^{z1}, u_j^{z2}>|^2 + |<v_i^{z1}, v_j^{z2}>|^2,
    each term in [0, 1] for unit vectors, so entries lie in [0, 2].
    """
    if not (spec1.has_vectors and spec2.has_vectors):
        raise MissingDataError("overlaps need singular vectors on both spectra")
    if spec1.n != spec2.n:
        raise InvalidInputError(f"dimension mismatch: {spec1.n} vs {spec2.n}")
    if not 1 <= k <= spec1.n:
        raise InvalidInputError(f"need 1 <= k <= n, got k={k}")
    U1 = spec1.left_vectors[:, :k]
    U2 = spec2.left_vectors[:, :k]
    V1 = spec1.right_vectors[:, :k]
    V2 = spec2.right_vectors[:, :k]
    uu = np.abs(U1.conj().T @ U2) ** 2
    vv = np.abs(V1.conj().T @ V2) ** 2
    return OverlapTable(k=k, entries=uu + vv)


def driver_correlation(spec1: SingularSpectrum, spec2: SingularSpectrum,
                       k: int) -> np.ndarray:
    """Instantaneous correlation of the singular-value Brownian drivers.

    Returns Re[<u_i^{z1}, u_j^{z2}> <v_j^{z2}, v_i^{z1}>] on unit vectors for
    the k smallest indices; the half-norm eigenvector convention of H^z
    contributes a factor 4*(1/2)*(1/2) = 1, so this *is* the full driver
    correlation (it equals 1 on the diagonal when z1 = z2).
    """
    if not (spec1.has_vectors and spec2.has_vectors):
        raise MissingDataError("driver_correlation needs singular vectors")
    if spec1.n != spec2.n:
        raise InvalidInputError(f"dimension mismatch: {spec1.n} vs {spec2.n}")
    U1 = spec1.left_vectors[:, :k]
    U2 = spec2.left_vectors[:, :k]
    V1 = spec1.right_vectors[:, :k]
    V2 = spec2.right_vectors[:, :k]
    uu = U1.conj().T @ U2              # <u_i^{z1}, u_j^{z2}>
    vv = (V2.conj().T @ V1).T          # <v_j^{z2}, v_i^{z1}> at (i, j)
    return np.real(uu * vv)
