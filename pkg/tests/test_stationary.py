import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from espider.chain import ModelParams, build_generator, level_marginal
from espider.stationary import (classical_comparison, entropy, entropy_argmax, g, g_approx,
                                limits_large_N, log_rho_vector, moments, rho_k, summary)


def direct_law(rho, N):
    """Stationary law from integer binomials, independent of the hypergeometric path."""
    w = np.array([rho ** k * math.comb(2 * N, N + k) for k in range(N + 1)], dtype=float)
    return w / w.sum()


class TestStationaryLaw:
    @pytest.mark.parametrize("rho", [0.1, 1.0, 7.0])
    def test_g_N1(self, rho):
        np.testing.assert_allclose(float(g(rho, 1)), 2 / (2 + rho), rtol=1e-15)

    @pytest.mark.parametrize("rho,N", [(0.3, 4), (1.0, 10), (2.5, 20), (0.9, 40)])
    def test_direct(self, rho, N):
        np.testing.assert_allclose(np.exp(log_rho_vector(rho, N)), direct_law(rho, N), rtol=1e-12)

    def test_null_space(self):
        p = ModelParams(1.7, 1.0, 6, 3)
        Q = build_generator(p).toarray()
        pi = np.exp(np.repeat(log_rho_vector(1.7, 6), 3)) / 3
        np.testing.assert_allclose(pi @ Q, 0.0, atol=1e-13)
        np.testing.assert_allclose(level_marginal(pi, 6, 3), np.exp(log_rho_vector(1.7, 6)))

    def test_rho0_is_g(self):
        assert rho_k(0, 0.37, 80).log_mag == g(0.37, 80).log_mag

    @pytest.mark.parametrize("args", [(0, 0.0, 5), (0, 1.0, 0), (6, 1.0, 5)])
    def test_domain(self, args):
        with pytest.raises(ValueError):
            rho_k(*args)

    @pytest.mark.parametrize("N,rho,k,printed", [
        (100, 0.25, 0, 0.754044),
        (100, 0.5, 20, 8.91315e-9),
        (1000, 0.5, 100, 1.77512e-35),
    ])
    def test_reference_cells(self, N, rho, k, printed):
        np.testing.assert_allclose(float(rho_k(k, rho, N)), printed, rtol=6e-6)

    def test_four_digit_cell(self):
        np.testing.assert_allclose(float(rho_k(0, 0.75, 500)), 0.2596, atol=5e-5)

    def test_far_below_double_range(self):
        m, e = rho_k(1000, 0.25, 1000).mantissa_exponent()
        assert e == -1203
        np.testing.assert_allclose(m, 3.191157888, rtol=1e-9)

    @settings(max_examples=40, deadline=None)
    @given(st.floats(0.01, 50), st.integers(1, 300))
    def test_normalized(self, rho, N):
        np.testing.assert_allclose(math.fsum(np.exp(log_rho_vector(rho, N))), 1.0, atol=1e-10)


class TestMoments:
    @pytest.mark.parametrize("rho,N", [(0.5, 3), (1.0, 12), (3.0, 30), (0.2, 100)])
    def test_direct_sums(self, rho, N):
        p = direct_law(rho, N)
        k = np.arange(N + 1)
        m = float(p @ k)
        v = float(p @ k ** 2) - m * m
        mean, var, cv = moments(rho, N)
        np.testing.assert_allclose([mean, var, cv], [m, v, math.sqrt(v) / m], rtol=1e-9)

    def test_limits(self):
        lim = limits_large_N(0.5)
        assert lim.mean == 1.0 and not lim.diverges
        assert limits_large_N(2.0).diverges
        np.testing.assert_allclose(limits_large_N(1.0).cv, math.sqrt(math.pi / 2 - 1))

    def test_large_N_trend(self):
        # the exact mean approaches rho/(1-rho) from below
        errs = [abs(moments(0.5, N)[0] - 1) for N in (100, 1000, 10000)]
        assert errs[0] > errs[1] > errs[2]


class TestApproximation:
    def test_domain(self):
        with pytest.raises(ValueError):
            g_approx(1.0, 100)

    @pytest.mark.parametrize("N,rho,printed", [(500, 0.5, 0.502939), (1000, 0.25, 0.750415)])
    def test_reference_values(self, N, rho, printed):
        np.testing.assert_allclose(float(g_approx(rho, N)), printed, rtol=2e-6)

    def test_four_digit_cell(self):
        np.testing.assert_allclose(float(g_approx(0.75, 500)), 0.2593, atol=5e-5)

    def test_converges(self):
        rel = [abs(float(g_approx(0.5, N)) / float(g(0.5, N)) - 1) for N in (100, 1000, 10000)]
        assert rel[0] > rel[1] > rel[2]


class TestEntropy:
    def test_N1_closed_form(self):
        p = 2 / (2 + 1.3)
        np.testing.assert_allclose(entropy(1.3, 1), -p * math.log(p) - (1 - p) * math.log(1 - p),
                                   rtol=1e-13)

    @pytest.mark.parametrize("N,m", [(2, 2.45), (10, 2.47), (30, 1.95)])
    def test_argmax_reference(self, N, m):
        res = entropy_argmax(N)
        assert res.unimodal
        assert abs(res.argmax - m) <= 0.01

    def test_argmax_N1_exact(self):
        # two-point law: entropy maximal at p0 = 1/2, i.e. rho = 2
        np.testing.assert_allclose(entropy_argmax(1).argmax, 2.0, atol=1e-4)


class TestClassical:
    @pytest.mark.parametrize("N", [1, 2, 7, 30])
    def test_identity(self, N):
        rep = classical_comparison(N)
        assert rep.holds
        np.testing.assert_allclose(rep.c_formula, rep.c_direct, rtol=1e-13)

    def test_summary(self):
        s = summary(0.8, 20)
        np.testing.assert_allclose(s.probs.sum(), 1.0)
        assert s.mean == moments(0.8, 20)[0]
