import math

import numpy as np
import pytest

from specrad import ginibre as gb
from specrad import girko
from specrad.errors import DomainError, InvalidParameterError
from specrad.incgamma import log_reg_inc_gamma_P, log_reg_inc_gamma_Q


class TestKernel:

    def test_diag_is_q_over_pi(self):
        # inside the disk Q(n, n r^2) ~ 1, so K(z,z) ~ n/pi
        val = gb.kernel_diag(200, 0.5).value
        assert val.imag == 0
        assert val.real == pytest.approx(200 / math.pi, rel=1e-12)
        # generic point: compare with the log-scale gamma routine
        ke = gb.kernel_diag(50, 1.4)
        expect = math.log(50 / math.pi) + log_reg_inc_gamma_Q(50, 50 * 1.96)
        assert ke.log_scale == pytest.approx(expect, rel=1e-12)
        assert ke.mantissa == 1.0

    def test_offdiag_matches_direct_sum(self):
        n = 4
        z, w = 0.3 + 0.2j, -0.1 + 0.5j
        zeta = n * z * np.conj(w)
        direct = (n / math.pi) * np.exp(-0.5 * n * (abs(z) ** 2 + abs(w) ** 2)) \
            * sum(zeta ** k / math.factorial(k) for k in range(n))
        assert gb.kernel_offdiag(n, z, w).value == pytest.approx(direct,
                                                                 rel=1e-13)

    def test_offdiag_hermitian_symmetry(self):
        a = gb.kernel_offdiag(24, 0.8 + 0.1j, 0.75 - 0.2j)
        b = gb.kernel_offdiag(24, 0.75 - 0.2j, 0.8 + 0.1j)
        assert a.value == pytest.approx(np.conj(b.value), rel=1e-12)
        assert not a.cancellation

    def test_offdiag_reduces_to_diag(self):
        z = 0.9 + 0.3j
        assert gb.kernel_offdiag(30, z, z).value == pytest.approx(
            gb.kernel_diag(30, z).value, rel=1e-11)

    def test_kernel_guards(self):
        with pytest.raises(InvalidParameterError):
            gb.kernel_diag(0, 1.0)
        with pytest.raises(InvalidParameterError):
            gb.kernel_offdiag(0, 1.0, 1.0)


class TestEdgeAsymptotics:

    def test_mu_edge_values(self):
        assert gb.mu_edge(1.0) == 0.0
        assert gb.mu_edge(math.e) == pytest.approx(math.sqrt(math.e - 2.0),
                                                   rel=1e-14)
        np.testing.assert_allclose(gb.mu_edge(np.array([1.0, math.e])),
                                   [0.0, math.sqrt(math.e - 2.0)], rtol=1e-14)
        with pytest.raises(DomainError):
            gb.mu_edge(0.0)

    def test_edge_tail_matches_exact_gamma(self):
        n = 400
        ts = np.linspace(1 + 1 / math.sqrt(n), 3.0, 40)
        rel = max(abs(math.exp(gb.log_edge_tail_asymptotic(n, t)
                               - log_reg_inc_gamma_Q(n, n * t)) - 1.0)
                  for t in ts)
        assert rel <= 10.0 / math.sqrt(n)
        assert rel <= 0.01   # observed constant is ~0.18/sqrt(n)
        with pytest.raises(DomainError):
            gb.log_edge_tail_asymptotic(400, 1.0)

    def test_prefactor_limit_at_edge(self):
        # mu(t)/(sqrt(2)(t-1)) -> 1/2 as t -> 1+, matching Q(n, n) -> 1/2
        t = 1.0 + 1e-7
        assert gb.mu_edge(t) / (math.sqrt(2.0) * (t - 1.0)) == pytest.approx(
            0.5, rel=1e-6)


class TestRadiusLaw:

    def test_kostlan_rank_one(self):
        law = gb.radius_law(1)
        for r in (0.2, 0.9, 1.3, 2.5):
            assert law.cdf(r) == pytest.approx(1.0 - math.exp(-r * r),
                                               rel=1e-12)
        assert law.cdf(0.0) == 0.0
        assert law.log_cdf(-1.0) == -math.inf

    def test_cdf_monotone_and_normalized(self):
        law = gb.radius_law(64)
        rs = np.linspace(0.3, 2.0, 25)
        cs = law.cdf(rs)
        assert np.all(np.diff(cs) >= 0)
        assert cs[-1] == pytest.approx(1.0, abs=1e-12)

    def test_windowed_product_matches_full_sum(self):
        n, r = 500, 1.05
        x = n * r * r
        full = float(np.sum(log_reg_inc_gamma_P(
            np.arange(1, n + 1, dtype=float), x)))
        assert gb.radius_law(n).log_cdf(r) == pytest.approx(full, abs=1e-13)

    def test_gumbel_normalization_frozen(self):
        assert gb.radius_law(1000).gumbel_cdf(0.0) == pytest.approx(
            0.09943439068204124, abs=1e-9)
        assert gb.radius_law(100000).gumbel_cdf(0.0) == pytest.approx(
            0.199147334822493, abs=1e-9)
        # limit value e^{-1}: finite-n approaches it from below
        assert gb.gumbel_limit_cdf(0.0) == pytest.approx(math.exp(-1.0))

    def test_gumbel_radius_mapping(self):
        law = gb.radius_law(1000)
        g = law.gamma
        assert law.gumbel_radius(0.0) == pytest.approx(
            1.0 + math.sqrt(g / 4000.0))
        with pytest.raises(InvalidParameterError):
            gb.radius_law(50).gumbel_cdf(0.0)   # gamma_n < 0 at this size

    def test_radius_law_guards(self):
        with pytest.raises(InvalidParameterError):
            gb.radius_law(0)
        assert gb.radius_law(200000).windowed
        assert not gb.radius_law(1000).windowed


class TestLinearStatistics:

    def test_full_disk_counts_everything(self):
        # f = 1 across the whole spectrum: sum f = n exactly, variance 0
        f = girko.make_test_function("custom", plateau=(0.0, 1.5), bridge=0.1)
        assert gb.linstat_mean(30, f) == pytest.approx(30.0, abs=1e-6)
        full = gb.linstat_var(30, f, truncation=25.0)
        assert abs(full.var) <= 1e-7

    def test_default_truncation_bias_is_positive_and_small(self):
        # dropping pairs beyond 10/sqrt(n) under-counts the cross term, so
        # the variance errs high by a documented ~0.07 on the full disk
        f = girko.make_test_function("custom", plateau=(0.0, 1.5), bridge=0.1)
        v = gb.linstat_var(30, f, truncation=10.0)
        assert 0.0 < v.var < 0.1
        assert v.var == pytest.approx(0.0686, abs=0.005)

    def test_annulus_moments_frozen(self):
        f = girko.make_test_function("annulus-f1", n=256)
        assert gb.linstat_mean(256, f) == pytest.approx(12.342471597588414,
                                                        rel=1e-8)
        v = gb.linstat_var(256, f)
        assert v.var == pytest.approx(6.6807297059851845, rel=1e-6)
        assert v.term_diag == pytest.approx(11.99725830338176, rel=1e-8)
        assert v.var == pytest.approx(v.term_diag - v.term_cross, rel=1e-12)
        assert v.refine_delta < 1e-10

    def test_linstat_guards(self):
        f = girko.make_test_function("annulus-f1", n=256)
        with pytest.raises(InvalidParameterError):
            gb.linstat_mean(0, f)
        with pytest.raises(InvalidParameterError):
            gb.linstat_var(0, f)
