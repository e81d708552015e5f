import math

import numpy as np
import pytest

from espider import compare
from espider.special import SignedLogValue


class TestDigitsMatch:
    def test_within_last_digit(self):
        assert compare.digits_match(SignedLogValue.from_float(0.7540436), "0.754044")[0]
        assert not compare.digits_match(SignedLogValue.from_float(0.75404), "0.754044")[0]

    def test_extreme(self):
        v = SignedLogValue(1, math.log(3.191157888) - 1203 * math.log(10))
        ok, used = compare.digits_match(v, "3.191157888e-1203")
        assert ok and used == 6
        assert not compare.digits_match(v, "3.191157888e-1202")[0]

    def test_sign(self):
        assert not compare.digits_match(SignedLogValue.from_float(-0.5), "0.5")[0]


class TestTables:
    def test_table1_domain(self):
        with pytest.raises(ValueError):
            compare.table1([10], [1.0], [0])

    def test_table1_cells(self):
        row = compare.table1([100], [0.5], [20])[0]
        assert compare.digits_match(row.exact, "8.91315e-9")[0]
        # the k-dependence of the approximation is the exact one
        other = compare.table1([100], [0.5], [0])[0]
        np.testing.assert_allclose(row.delta, other.delta, rtol=1e-10)

    def test_table3_examples(self):
        rows = {(r.N, r.k): r for r in compare.table3([5000, 10000, 15000], 0.1, 1.0, [0, 50])}
        r = rows[(5000, 0)]
        for got, printed in ((r.approx, "0.0159577"), (r.exact, "0.015831"),
                             (SignedLogValue.from_float(r.delta), "0.00800385")):
            assert compare.digits_match(got, printed)[0]
        r = rows[(15000, 50)]
        for got, printed in ((r.approx, "0.00779879"), (r.exact, "0.007763"),
                             (SignedLogValue.from_float(r.delta), "0.00460965")):
            assert compare.digits_match(got, printed)[0]

    def test_delta_decreases_with_N(self):
        for k in (0, 10, 50):
            d = [r.delta for r in compare.table3([5000, 10000, 15000], 0.1, 1.0, [k])]
            assert d[0] > d[1] > d[2] > 0

    def test_table2(self):
        cells = compare.check_table2()
        assert len(cells) == 8 and all(c.ok for c in cells)


class TestMoments:
    def test_mean_ratio_5000(self):
        rep = compare.moment_agreement(5000)
        assert abs(rep.mean_ratio_stirling - 1) < 0.01

    def test_ratios_converge(self):
        reps = [compare.moment_agreement(N) for N in (1000, 10_000, 100_000)]
        for attr in ("mean_ratio_diffusion", "var_ratio_diffusion"):
            errs = [abs(getattr(r, attr) - 1) for r in reps]
            assert errs[0] > errs[1] > errs[2]

    def test_diffusion_mean_equals_leading_asymptotic(self):
        # sigma/sqrt(pi alpha)/eps with sigma2 = 2 N eps^2 and alpha = 2
        rep = compare.moment_agreement(10_000, 0.05)
        np.testing.assert_allclose(rep.mean_diffusion, math.sqrt(10_000 / math.pi), rtol=1e-14)
