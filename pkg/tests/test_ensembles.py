import math

import numpy as np
import pytest

from specrad.ensembles import (ENTRY_KINDS, EntryDistribution, FlowKind,
                               MatrixSample, evolve, sample_ginibre, sample_iid)
from specrad.errors import (ConfigurationError, InvalidDimensionError,
                            InvalidParameterError)


def test_unknown_kind_rejected():
    with pytest.raises(ConfigurationError):
        EntryDistribution("gaussian")
    with pytest.raises(ConfigurationError):
        FlowKind("heat")
    with pytest.raises(InvalidParameterError):
        FlowKind("brownian", dt=0.0)


def test_shapes_and_seed_reproducibility():
    X = sample_ginibre(17, seed=4)
    Y = sample_ginibre(17, seed=4)
    np.testing.assert_array_equal(X.entries, Y.entries)
    assert X.entries.shape == (17, 17)
    assert X.entries.dtype == np.complex128
    assert not np.array_equal(X.entries, sample_ginibre(17, seed=5).entries)
    with pytest.raises(InvalidDimensionError):
        sample_ginibre(0, seed=1)


@pytest.mark.parametrize("kind", ENTRY_KINDS)
def test_entry_moments(kind):
    # E chi = 0, E|chi|^2 = 1, E chi^2 = 0, at matrix normalization 1/n
    n = 400
    X = sample_iid(n, EntryDistribution(kind), seed=11)
    chi = X.entries * math.sqrt(n)
    m = chi.mean()
    assert abs(m) < 4.0 / math.sqrt(n * n) * 10
    assert np.mean(np.abs(chi) ** 2) == pytest.approx(1.0, abs=0.02)
    assert abs(np.mean(chi ** 2)) < 0.02


def test_bernoulli_entries_on_lattice():
    X = sample_iid(50, EntryDistribution("symmetric-complex-bernoulli"), seed=0)
    vals = X.entries * math.sqrt(50) * math.sqrt(2.0)
    np.testing.assert_allclose(np.abs(vals.real), 1.0, atol=1e-12)
    np.testing.assert_allclose(np.abs(vals.imag), 1.0, atol=1e-12)
    # all four sign combinations occur
    assert len({(int(np.sign(v.real)), int(np.sign(v.imag)))
                for v in vals.ravel()}) == 4


def test_uniform_disk_radius():
    X = sample_iid(300, EntryDistribution("uniform-complex-disk"), seed=2)
    r = np.abs(X.entries) * math.sqrt(300)
    assert r.max() <= math.sqrt(2.0) + 1e-12
    # radius^2/2 should be Uniform(0,1): check quartiles roughly
    u = r ** 2 / 2.0
    assert np.quantile(u, 0.5) == pytest.approx(0.5, abs=0.02)


def test_brownian_flow_adds_variance():
    X = sample_ginibre(200, seed=1)
    t = 0.3
    Y = evolve(X, FlowKind("brownian"), t, seed=99)
    assert Y.flow_time == pytest.approx(t)
    diff = Y.entries - X.entries
    var = np.mean(np.abs(diff) ** 2) * 200
    assert var == pytest.approx(t, rel=0.05)


def test_ou_flow_preserves_ginibre_variance():
    X = sample_ginibre(300, seed=1)
    Y = evolve(X, FlowKind("ornstein-uhlenbeck"), 0.7, seed=5)
    v0 = np.mean(np.abs(X.entries) ** 2) * 300
    v1 = np.mean(np.abs(Y.entries) ** 2) * 300
    assert v1 == pytest.approx(v0, rel=0.05)
    assert v1 == pytest.approx(1.0, rel=0.05)


def test_zero_time_flow_is_identity_copy():
    X = sample_ginibre(8, seed=0)
    Y = evolve(X, FlowKind("brownian"), 0.0, seed=123)
    np.testing.assert_array_equal(X.entries, Y.entries)
    assert Y.entries is not X.entries
    with pytest.raises(InvalidParameterError):
        evolve(X, FlowKind("brownian"), -0.1, seed=0)


def test_matrix_sample_shape_guard():
    with pytest.raises(InvalidDimensionError):
        MatrixSample(n=3, entries=np.zeros((2, 3), dtype=complex),
                     ensemble="ginibre", seed=0)
