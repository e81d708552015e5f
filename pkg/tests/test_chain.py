import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from espider.chain import (SWITCH_KINDS, Interior, ModelParams, Origin, as_switch_matrix,
                           build_generator, enumerate_states, example_switch_matrix,
                           level_marginal, state_index, switch_stationary, transition_rate)


def random_walk_pi(d, p):
    """Detailed-balance solution of the reflecting ray walk."""
    w = np.empty(d)
    w[0] = 1.0
    w[1] = 1.0 / (1 - p)
    for l in range(2, d - 1):
        w[l] = w[l - 1] * p / (1 - p)
    w[d - 1] = w[d - 2] * p
    return w / w.sum()


class TestSwitchMatrix:
    @pytest.mark.parametrize("kind", SWITCH_KINDS)
    def test_stochastic(self, kind):
        C = example_switch_matrix(kind, 4, 0.3)
        np.testing.assert_allclose(C.sum(axis=1), 1.0)
        assert not C.flags.writeable

    def test_rejects_non_stochastic(self):
        with pytest.raises(ValueError):
            as_switch_matrix([[0.5, 0.4], [0.5, 0.5]])

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            example_switch_matrix("spiral", 3)

    def test_cyclic_uniform_limit(self):
        np.testing.assert_allclose(switch_stationary(example_switch_matrix("cyclic", 5)), 0.2, atol=1e-14)

    def test_sequential_absorbs(self):
        np.testing.assert_allclose(switch_stationary(example_switch_matrix("sequential", 4)),
                                   [0, 0, 0, 1], atol=1e-14)

    @pytest.mark.parametrize("d,p", [(3, 0.2), (4, 0.3), (5, 0.5), (6, 0.7)])
    def test_random_walk(self, d, p):
        np.testing.assert_allclose(switch_stationary(example_switch_matrix("random-walk", d, p)),
                                   random_walk_pi(d, p), atol=1e-14)

    def test_two_closed_classes_weighted_by_start(self):
        C = np.array([[1.0, 0, 0], [0.5, 0, 0.5], [0, 0, 1.0]])
        np.testing.assert_allclose(switch_stationary(C, start=[0, 1, 0]), [0.5, 0, 0.5])

    @settings(max_examples=30, deadline=None)
    @given(st.integers(2, 6), st.integers(0, 2 ** 31))
    def test_stationarity_property(self, d, seed):
        C = np.random.default_rng(seed).random((d, d)) + 0.01
        C /= C.sum(axis=1, keepdims=True)
        pi = switch_stationary(C)
        np.testing.assert_allclose(pi @ C, pi, atol=1e-12)
        np.testing.assert_allclose(pi.sum(), 1.0)


class TestModelParams:
    def test_defaults_and_rho(self):
        p = ModelParams(2.0, 4.0, 3)
        assert p.rho == 0.5
        assert p.n_states == 4
        np.testing.assert_array_equal(p.C, [[1.0]])

    @pytest.mark.parametrize("args", [(0, 1, 1), (1, -1, 1), (1, 1, 0), (1, 1, 2.5)])
    def test_invalid(self, args):
        with pytest.raises(ValueError):
            ModelParams(*args)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            ModelParams(1, 1, 2, d=3, C=np.eye(2))

    def test_json_roundtrip(self):
        p = ModelParams(1.5, 0.5, 7, 3, example_switch_matrix("cyclic", 3))
        q = ModelParams.from_json(p.to_json())
        assert p == q and hash(p) == hash(q)

    def test_config_schema(self):
        cfg = {"lambda": 2, "mu": 1, "N": 4, "d": 3, "switch": {"kind": "random-walk", "p": 0.3}}
        p = ModelParams.from_dict(cfg)
        np.testing.assert_array_equal(p.C, example_switch_matrix("random-walk", 3, 0.3))
        assert json.loads(p.to_json())["N"] == 4


class TestGenerator:
    def test_rates(self):
        p = ModelParams(2.0, 3.0, 4, 2, example_switch_matrix("cyclic", 2))
        assert transition_rate(Origin(1), Interior(1, 2), p) == 8.0
        assert transition_rate(Origin(1), Interior(1, 1), p) == 0.0
        assert transition_rate(Interior(1, 2), Origin(2), p) == 15.0
        assert transition_rate(Interior(1, 2), Origin(1), p) == 0.0
        assert transition_rate(Interior(2, 1), Interior(3, 1), p) == 4.0
        assert transition_rate(Interior(2, 1), Interior(1, 1), p) == 18.0
        assert transition_rate(Interior(4, 1), Interior(3, 1), p) == 24.0
        assert transition_rate(Interior(2, 1), Interior(2, 2), p) == 0.0

    def test_matches_rate_function(self):
        p = ModelParams(1.3, 0.7, 3, 3, example_switch_matrix("random-walk", 3, 0.4))
        Q = build_generator(p).toarray()
        states = enumerate_states(p)
        for a in states:
            for b in states:
                if a != b:
                    assert Q[state_index(a, 3), state_index(b, 3)] == transition_rate(a, b, p)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(1, 8), st.integers(1, 4), st.floats(0.1, 5), st.floats(0.1, 5))
    def test_rows_sum_to_zero(self, N, d, lam, mu):
        Q = build_generator(ModelParams(lam, mu, N, d))
        np.testing.assert_allclose(np.asarray(Q.sum(axis=1)).ravel(), 0.0, atol=1e-12)
        assert Q.shape == (d * (N + 1),) * 2

    def test_level_marginal(self):
        v = np.arange(6.0)
        np.testing.assert_array_equal(level_marginal(v, 2, 2), [1, 5, 9])
