import numpy as np
import pytest

from specrad.ensembles import MatrixSample, sample_ginibre
from specrad.errors import (InvalidInputError, InvalidParameterError,
                            MissingDataError)
from specrad.hermitization import (CLAMP_REL, clamp_lambdas,
                                   driver_correlation, eta_integral, hermitize,
                                   overlaps, resolvent_matrix, resolvent_trace,
                                   singular_spectrum)


def _sample(n=24, seed=3):
    return sample_ginibre(n, seed=seed)


def test_one_by_one_resolvent_oracle():
    # X = [0], z = 1: H = [[0,-1],[-1,0]], and (H - i)^{-1} = (H + i)/2.
    X = MatrixSample(n=1, entries=np.zeros((1, 1), dtype=complex),
                     ensemble="zero", seed=0)
    spec = singular_spectrum(X, 1.0, want_vectors=True)
    assert spec.lambdas[0] == pytest.approx(1.0)
    G = resolvent_matrix(spec, 1j)
    expected = np.array([[0.5j, -0.5], [-0.5, 0.5j]])
    np.testing.assert_allclose(G, expected, atol=1e-14)


def test_hermitize_structure():
    X = _sample(9)
    H = hermitize(X, 0.3 + 0.1j)
    assert H.shape == (18, 18)
    np.testing.assert_allclose(H, H.conj().T, atol=1e-15)
    np.testing.assert_allclose(H[:9, :9], 0, atol=0)
    np.testing.assert_allclose(H[9:, 9:], 0, atol=0)


def test_spectrum_matches_hermitization_eigenvalues():
    X = _sample(16)
    z = 0.8 - 0.2j
    spec = singular_spectrum(X, z)
    assert np.all(np.diff(spec.lambdas) >= 0)
    eigs = np.linalg.eigvalsh(hermitize(X, z))
    np.testing.assert_allclose(np.sort(np.abs(eigs)),
                               np.sort(np.repeat(spec.lambdas, 2)),
                               atol=1e-10)


def test_singular_vectors_factorize():
    X = _sample(12)
    z = 1.1
    spec = singular_spectrum(X, z, want_vectors=True)
    A = X.entries - z * np.eye(12)
    U, V, lam = spec.left_vectors, spec.right_vectors, spec.lambdas
    np.testing.assert_allclose(A @ V, U * lam, atol=1e-12)
    # phase convention: anchor component of each right vector real positive
    anchors = V[np.argmax(np.abs(V), axis=0), np.arange(12)]
    assert np.all(np.abs(anchors.imag) < 1e-12)
    assert np.all(anchors.real > 0)
    # eigenvectors of H are (u, +-v)/sqrt(2)
    H = hermitize(X, z)
    i = 4
    w_plus = np.concatenate([U[:, i], V[:, i]]) / np.sqrt(2)
    w_minus = np.concatenate([U[:, i], -V[:, i]]) / np.sqrt(2)
    np.testing.assert_allclose(H @ w_plus, lam[i] * w_plus, atol=1e-12)
    np.testing.assert_allclose(H @ w_minus, -lam[i] * w_minus, atol=1e-12)


def test_resolvent_trace_agrees_with_dense_matrix():
    X = _sample(20)
    spec = singular_spectrum(X, 0.5 + 0.5j, want_vectors=True)
    eta = 0.07
    fn = resolvent_trace(spec, eta)
    G = resolvent_matrix(spec, 1j * eta)
    assert fn.im_trace == pytest.approx(np.trace(G).imag, abs=1e-11)
    assert fn.avg_trace == pytest.approx(np.trace(G) / 40, abs=1e-12)
    with pytest.raises(InvalidParameterError):
        resolvent_trace(spec, 0.0)


def test_ward_identity():
    """Row sums of |G|^2 equal Im G_ii / eta on the imaginary axis."""
    X = _sample(18, seed=7)
    spec = singular_spectrum(X, 1.05, want_vectors=True)
    eta = 0.02
    G = resolvent_matrix(spec, 1j * eta)
    lhs = np.sum(np.abs(G) ** 2, axis=1)
    rhs = np.imag(np.diag(G)) / eta
    np.testing.assert_allclose(lhs, rhs, atol=1e-9)


def test_block_traces_and_diagonal_imaginary():
    X = _sample(22, seed=9)
    spec = singular_spectrum(X, 0.9 + 0.4j, want_vectors=True)
    G = resolvent_matrix(spec, 0.05j)
    n = 22
    t11 = np.trace(G[:n, :n])
    t22 = np.trace(G[n:, n:])
    assert t11 == pytest.approx(t22, abs=1e-9)
    assert t11 + t22 == pytest.approx(np.trace(G), abs=1e-12)
    assert np.max(np.abs(np.real(np.diag(G)))) < 1e-10


def test_resolvent_matrix_guards():
    X = _sample(5)
    bare = singular_spectrum(X, 0.0)
    with pytest.raises(MissingDataError):
        resolvent_matrix(bare, 1j)
    full = singular_spectrum(X, 0.0, want_vectors=True)
    with pytest.raises(InvalidParameterError):
        resolvent_matrix(full, 0.3)  # real w not allowed


def test_eta_integral_matches_quadrature():
    from scipy.integrate import quad
    lams = np.array([0.0, 0.3, 2.0])
    a, b = 0.01, 1.5
    exact = eta_integral(lams, a, b)
    for lam, val in zip(lams, exact):
        num, _ = quad(lambda e: e / (lam ** 2 + e ** 2), a, b)
        assert val == pytest.approx(num, abs=1e-10)


def test_clamp_lambdas_counts():
    lam = np.array([0.0, 1e-20, 0.5, 1.0])
    clamped, count = clamp_lambdas(lam)
    assert count == 2
    assert clamped[0] == pytest.approx(CLAMP_REL)
    np.testing.assert_array_equal(clamped[2:], lam[2:])


def test_overlaps_self_and_bounds():
    X = _sample(10)
    s1 = singular_spectrum(X, 0.2, want_vectors=True)
    s2 = singular_spectrum(X, 0.2 + 0.3j, want_vectors=True)
    table = overlaps(s1, s1, k=10)
    np.testing.assert_allclose(np.diag(table.entries), 2.0, atol=1e-12)
    cross = overlaps(s1, s2, k=6)
    assert cross.entries.shape == (6, 6)
    assert np.all(cross.entries >= 0) and np.all(cross.entries <= 2 + 1e-12)
    with pytest.raises(InvalidInputError):
        overlaps(s1, s2, k=11)
    with pytest.raises(MissingDataError):
        overlaps(singular_spectrum(X, 0.2), s2, k=2)


def test_driver_correlation_diagonal_one_on_same_point():
    X = _sample(14)
    s = singular_spectrum(X, 0.6, want_vectors=True)
    rho = driver_correlation(s, s, k=5)
    np.testing.assert_allclose(np.diag(rho), 1.0, atol=1e-12)
    assert np.all(np.abs(rho) <= 1 + 1e-12)


def test_driver_correlation_dimension_guard():
    a = singular_spectrum(_sample(6), 0.0, want_vectors=True)
    b = singular_spectrum(_sample(7), 0.0, want_vectors=True)
    with pytest.raises(InvalidInputError):
        driver_correlation(a, b, k=2)
