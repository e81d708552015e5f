import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from espider.chain import Interior, ModelParams, Origin, example_switch_matrix
from espider.stationary import g
from espider.transient import (laplace_H, level_probs_closed, p0_closed, pgf_F, polynomial_P,
                               pr_closed, roots_of_P, transient_oracle)


def p0_single(t, mu):
    # N = 1, lam = mu: two-state chain with rates mu (out of 0) and 2 mu (back)
    return 2 / 3 + np.exp(-3 * mu * t) / 3


class TestOracle:
    def test_two_state_exact(self):
        p = ModelParams(1.5, 1.5, 1)
        for t in (0.0, 0.2, 1.0, 4.0):
            sol = transient_oracle(p, t)
            np.testing.assert_allclose(sol.level_probs[0], p0_single(t, 1.5), atol=1e-13)

    def test_rk_agrees(self):
        p = ModelParams(2.0, 1.0, 4, 3, example_switch_matrix("random-walk", 3, 0.3))
        t = [0.1, 1.0, 5.0]
        a = transient_oracle(p, t)
        b = transient_oracle(p, t, method="rk")
        for x, y in zip(a, b):
            np.testing.assert_allclose(x.ray_resolved, y.ray_resolved, atol=1e-10)

    def test_initial_state(self):
        p = ModelParams(1.0, 2.0, 3, 2)
        sol = transient_oracle(p, 0.0, init=Interior(2, 2))
        assert sol.ray_resolved[2, 1] == 1.0

    def test_long_time_stationary(self):
        p = ModelParams(2.0, 1.0, 5, 2)
        sol = transient_oracle(p, 50.0)
        np.testing.assert_allclose(sol.level_probs[0], float(g(2.0, 5)), atol=1e-12)

    def test_negative_time(self):
        with pytest.raises(ValueError):
            transient_oracle(ModelParams(1, 1, 2), -1.0)

    @settings(max_examples=20, deadline=None)
    @given(st.integers(1, 6), st.integers(1, 3), st.floats(0.2, 3), st.floats(0.2, 3),
           st.floats(0, 5))
    def test_mass_conserved(self, N, d, lam, mu, t):
        sol = transient_oracle(ModelParams(lam, mu, N, d), t, init=Origin(1))
        np.testing.assert_allclose(sol.level_probs.sum(), 1.0, atol=1e-12)
        assert np.all(sol.level_probs > -1e-14)


class TestRoots:
    def test_N2_roots(self):
        # Q + Q2 = 2x^2 + 20x + 44 for mu = 1
        sd = roots_of_P(2, 1.0)
        np.testing.assert_allclose(sd.roots, [0.0, -5 + math.sqrt(3), -5 - math.sqrt(3)], atol=1e-14)

    def test_N1_roots_and_weights(self):
        sd = roots_of_P(1, 2.0)
        np.testing.assert_allclose(sd.roots, [0.0, -6.0], atol=1e-14)
        # p(0,t) = 2 sum_k R_k exp(alpha_k t)
        np.testing.assert_allclose(2 * sd.weights, [2 / 3, 1 / 3], atol=1e-14)

    @pytest.mark.parametrize("N", [1, 2, 5, 10, 25, 60])
    def test_roots_bracketed_and_zero(self, N):
        mu = 0.7
        sd = roots_of_P(N, mu)
        for j, x in enumerate(sd.roots[1:], start=1):
            assert -4 * j * mu < x < -(4 * j - 2) * mu
        assert sd.residual < 1e-12
        np.testing.assert_allclose(2 * sd.weights.sum(), 1.0, atol=1e-10)

    def test_odd_middle_root_exact(self):
        assert (-(2 * 7 + 1) * 1.0) in roots_of_P(7, 1.0).roots
        assert polynomial_P(-15.0, 7, 1.0).sign == 0 or abs(float(polynomial_P(-15.0, 7, 1.0))) < 1e-6

    def test_stationary_weight(self):
        for N in (1, 4, 9):
            np.testing.assert_allclose(2 * roots_of_P(N, 1.0).weights[0], float(g(1.0, N)), rtol=1e-13)


class TestClosedForm:
    @pytest.mark.parametrize("mu", [0.5, 1.0, 2.0])
    def test_N1(self, mu):
        t = np.linspace(0, 3, 7)
        np.testing.assert_allclose(p0_closed(t, 1, mu), p0_single(t, mu), atol=1e-14)

    @pytest.mark.parametrize("N", [2, 3, 6])
    def test_against_oracle(self, N):
        for t in (0.05, 0.7, 2.5):
            sol = transient_oracle(ModelParams(1.0, 1.0, N), t)
            np.testing.assert_allclose(level_probs_closed(t, N, 1.0), sol.level_probs, atol=1e-10)

    def test_pr_zero_at_start(self):
        for r in (1, 2, 3):
            np.testing.assert_allclose(pr_closed(r, 0.0, 3, 1.0), 0.0, atol=1e-12)

    def test_pr_bounds(self):
        with pytest.raises(ValueError):
            pr_closed(5, 1.0, 3, 1.0)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(1, 8), st.floats(0.1, 3), st.floats(0, 10))
    def test_probability_vector(self, N, mu, t):
        p = level_probs_closed(t, N, mu)
        np.testing.assert_allclose(p.sum(), 1.0, atol=1e-9)
        assert np.all(p > -1e-9)


class TestTransforms:
    def test_laplace_N1(self):
        # integral of e^{-t}(2/3 + e^{-3t}/3)
        np.testing.assert_allclose(laplace_H(1.0, ModelParams(1.0, 1.0, 1)), 0.75, rtol=1e-13)

    def test_laplace_domain(self):
        with pytest.raises(ValueError):
            laplace_H(-1.0, ModelParams(1.0, 1.0, 2))
        assert laplace_H(0.0, ModelParams(1.0, 1.0, 2)) == math.inf

    @pytest.mark.parametrize("lam", [1.0, 2.0, 0.5])
    def test_pgf_direct_sum(self, lam):
        p = ModelParams(lam, 1.0, 4)
        t = 0.8
        probs = transient_oracle(p, t).level_probs
        for z in (0.0, 0.3, 0.9, 1.0):
            direct = float(np.sum(probs * z ** np.arange(5)))
            np.testing.assert_allclose(pgf_F(z, t, p), direct, atol=1e-7)

    def test_pgf_time_zero(self):
        assert pgf_F(0.4, 0.0, ModelParams(1.0, 1.0, 3)) == 1.0
