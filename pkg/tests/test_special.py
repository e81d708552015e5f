import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from espider.special import (SignedLogValue, SingularParameterError, erf, hyp2f1_terminating,
                             ln_binomial, ln_gamma, log_sum)


def exact_2f1(a, b, c, z):
    """Terminating series in rational arithmetic, independent of the library path."""
    b, c, z = Fraction(b), Fraction(c), Fraction(z)
    term, total = Fraction(1), Fraction(1)
    for n in range(-a):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        total += term
    return total


finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False).filter(lambda x: abs(x) > 1e-6)


class TestSignedLogValue:
    def test_zero_normalization(self):
        z = SignedLogValue(1, -math.inf)
        assert z.sign == 0
        assert float(z) == 0.0
        assert SignedLogValue.zero() == z

    def test_bad_sign(self):
        with pytest.raises(ValueError):
            SignedLogValue(2, 0.0)

    def test_extreme_format(self):
        v = SignedLogValue(1, -1202.4960517077905 * math.log(10))
        assert v.format().startswith("3.19115788")
        assert v.format().endswith("e-1203")
        m, e = v.mantissa_exponent()
        assert e == -1203
        np.testing.assert_allclose(m, 3.191157888, rtol=1e-9)

    def test_normal_format_roundtrips(self):
        v = SignedLogValue.from_float(0.1)
        assert float(v.format()) == float(v)

    def test_pow_and_reciprocal(self):
        v = SignedLogValue.from_float(-3.0)
        np.testing.assert_allclose(float(v ** 3), -27.0, rtol=1e-14)
        np.testing.assert_allclose(float(v.reciprocal()), -1 / 3, rtol=1e-14)

    def test_log_sum_cancels(self):
        vals = [SignedLogValue.from_float(x) for x in (1.5, -1.5, 2.0)]
        np.testing.assert_allclose(float(log_sum(vals)), 2.0, rtol=1e-14)

    @given(finite, finite)
    def test_arithmetic_matches_floats(self, x, y):
        a, b = SignedLogValue.from_float(x), SignedLogValue.from_float(y)
        np.testing.assert_allclose(float(a * b), x * y, rtol=1e-12)
        np.testing.assert_allclose(float(a / b), x / y, rtol=1e-12)
        np.testing.assert_allclose(float(a + b), x + y, rtol=1e-9, atol=1e-9 * (abs(x) + abs(y)))

    @given(finite, finite)
    def test_add_sub_roundtrip(self, x, y):
        # bounded magnitude ratio keeps the subtraction well conditioned
        if math.log(abs(y)) > math.log(abs(x)) + 5:
            return
        a, b = SignedLogValue.from_float(x), SignedLogValue.from_float(y)
        np.testing.assert_allclose(float((a + b) - b), x, rtol=1e-9)

    @given(finite, finite)
    def test_rel_diff_matches_floats(self, x, y):
        a, b = SignedLogValue.from_float(x), SignedLogValue.from_float(y)
        np.testing.assert_allclose(a.rel_diff(b), (y - x) / x, rtol=1e-8, atol=1e-12 * abs(y / x))

    def test_rel_diff_beyond_double_range(self):
        a = SignedLogValue(1, -3000.0)
        b = SignedLogValue(1, -3000.0 + 1e-6)
        np.testing.assert_allclose(a.rel_diff(b), math.expm1(1e-6), rtol=1e-6)


class TestSpecialFunctions:
    def test_ln_binomial_matches_comb(self):
        for n in (5, 60, 61, 200):
            for k in (0, 1, n // 3, n):
                np.testing.assert_allclose(ln_binomial(n, k), math.log(math.comb(n, k)),
                                           rtol=1e-13, atol=1e-13)

    def test_ln_binomial_domain(self):
        with pytest.raises(ValueError):
            ln_binomial(3, 4)

    def test_ln_gamma(self):
        np.testing.assert_allclose(ln_gamma(10.0), math.log(362880.0), rtol=1e-15)

    def test_erf_odd(self):
        for x in (0.1, 1.3, 4.0):
            assert erf(-x) == -erf(x)
        np.testing.assert_allclose(erf(1.0), 0.8427007929497149, rtol=1e-15)


class TestHyp2f1:
    def test_small_exact(self):
        # 1 + 2/3 + 1/6
        np.testing.assert_allclose(float(hyp2f1_terminating(-2, 1, 3, -1)), 11 / 6, rtol=1e-15)

    def test_a_zero(self):
        assert float(hyp2f1_terminating(0, 3.5, 2.0, 7.0)) == 1.0

    def test_stops_at_b(self):
        # b = -1 ends the series after one term: 1 + (-5)(-1)/(2) z
        np.testing.assert_allclose(float(hyp2f1_terminating(-5, -1, 2.0, 0.3)), 1 + 0.75, rtol=1e-15)

    def test_singular(self):
        with pytest.raises(SingularParameterError):
            hyp2f1_terminating(-3, 1.0, -1.0, 0.5)

    def test_positive_a_rejected(self):
        with pytest.raises(ValueError):
            hyp2f1_terminating(2, 1.0, 1.0, 0.5)

    @pytest.mark.parametrize("N,rho", [(1, 0.5), (10, 0.25), (50, 3.0), (200, 0.75)])
    def test_against_rationals(self, N, rho):
        ref = exact_2f1(-N, 1, 1 + N, -rho)
        v = hyp2f1_terminating(-N, 1.0, 1.0 + N, -rho)
        np.testing.assert_allclose(v.log_mag, math.log(ref), rtol=1e-13)

    def test_heavy_cancellation_uses_exact_path(self):
        # alternating series with a tiny result
        a, b, c, z = -40, 1.0, 1.0, 1.0
        ref = exact_2f1(a, b, c, z)  # (1 - z)^40 = 0 here
        assert ref == 0
        assert hyp2f1_terminating(a, b, c, z).sign == 0

    @settings(max_examples=40, deadline=None)
    @given(st.integers(min_value=1, max_value=60), st.floats(min_value=-4, max_value=4))
    def test_property_matches_rationals(self, n, z):
        ref = exact_2f1(-n, 1.5, 2.5, z)
        v = hyp2f1_terminating(-n, 1.5, 2.5, z)
        np.testing.assert_allclose(float(v), float(ref), rtol=1e-9, atol=1e-12 * max(1, abs(z)) ** n)
