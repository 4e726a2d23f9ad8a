import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats as sps

from haltondisc.discrepancy import l2_exact, lp_mc
from haltondisc.pointsets import halton
from haltondisc.stats import (
    clt_samples,
    gaussian_moment,
    kappa,
    ks_normal,
    moment_report,
    ratio_table,
    scaling_table,
    shape_summary,
)


class TestKappa:
    def test_even_closed_form(self):
        assert kappa(2) == 1.0
        assert kappa(4) == 3.0
        assert kappa(6) == 15.0

    def test_one(self):
        assert abs(kappa(1) - math.sqrt(2 / math.pi)) < 1e-12
        assert abs(kappa(1) - 0.7978845608) < 1e-8

    @given(st.floats(0.1, 12))
    def test_gamma_identity(self, p):
        # E|Z|^p = 2^(p/2) Gamma((p+1)/2) / sqrt(pi)
        want = 2 ** (p / 2) * math.gamma((p + 1) / 2) / math.sqrt(math.pi)
        assert kappa(p) == pytest.approx(want, rel=1e-10)

    @pytest.mark.parametrize("p", [0, -2, math.inf, math.nan])
    def test_invalid(self, p):
        with pytest.raises(ValueError):
            kappa(p)


def test_gaussian_moment():
    assert [gaussian_moment(h) for h in range(7)] == [1, 0, 1, 0, 3, 0, 15]
    for r in range(1, 6):
        assert gaussian_moment(2 * r) == kappa(2 * r)
    with pytest.raises(ValueError):
        gaussian_moment(-1)


class TestMoments:
    def test_synthetic_normal(self):
        y = np.random.default_rng(0).standard_normal(100_000)
        rep = moment_report(y, 4)
        for h in range(1, 5):
            assert rep[h].deviation < 4 * rep[h].stderr

    def test_constant_zero(self):
        rep = moment_report(np.zeros(50), 4)
        assert rep[2].deviation == 1.0 and rep[4].deviation == 3.0

    def test_odd_symmetric(self):
        y = np.random.default_rng(1).standard_normal(5000)
        rep = moment_report(np.concatenate([y, -y]), 5)
        assert abs(rep[1].empirical) < 1e-15 and abs(rep[3].empirical) < 1e-12

    def test_jackknife_matches_plain_stderr(self):
        # for a mean the jackknife error is the usual sd / sqrt(M)
        y = np.random.default_rng(2).standard_normal(2000)
        rep = moment_report(y, 2)
        assert rep[1].stderr == pytest.approx(np.std(y, ddof=1) / math.sqrt(len(y)), rel=1e-10)

    def test_h_max(self):
        with pytest.raises(ValueError):
            moment_report(np.zeros(5), 1)


class TestKS:
    def test_quantiles(self):
        M = 1000
        y = sps.norm.ppf((np.arange(1, M + 1) - 0.5) / M)
        assert ks_normal(y) <= 1 / (2 * M) + 1e-7

    def test_zeros(self):
        assert ks_normal(np.zeros(20)) == 0.5

    def test_matches_scipy(self):
        y = np.random.default_rng(3).standard_normal(777) * 1.1 + 0.05
        assert ks_normal(y) == pytest.approx(sps.kstest(y, "norm").statistic, abs=1e-12)


def test_shape_summary():
    y = np.random.default_rng(4).standard_normal(50_000)
    s = shape_summary(y)
    assert s["skewness"] == pytest.approx(sps.skew(y), abs=1e-12)
    assert s["kurtosis"] == pytest.approx(sps.kurtosis(y, fisher=False), abs=1e-12)
    assert abs(s["kurtosis"] - 3) < 0.1


class TestClt:
    def test_deterministic(self):
        a = clt_samples("hammersley", (2, 3), 64, 500, 5)
        b = clt_samples("hammersley", (2, 3), 64, 500, 5)
        assert np.array_equal(a.values, b.values)
        assert a.n_points == 64 and a.M == 500
        assert a.provenance()["seed"] == 5

    def test_second_moment_is_one(self):
        S = clt_samples("hammersley", (2, 3), 256, 100_000, 0)
        rep = moment_report(S, 2)
        assert rep[2].deviation < 4 * rep[2].stderr

    @pytest.mark.parametrize("variant", ["hammersley-sym", "hammersley_sym_dot"])
    def test_variants(self, variant):
        S = clt_samples(variant, (2, 3), 16, 200, 1)
        assert np.all(np.isfinite(S.values))

    def test_bad_variant(self):
        with pytest.raises(ValueError):
            clt_samples("halton", (2, 3), 16, 10, 0)


class TestTables:
    def test_scaling_single(self):
        (row,) = scaling_table((2, 3), 2, [64])
        raw = l2_exact(halton((2, 3), 0, 64)).raw
        assert row.raw == raw and row.n == 7
        assert row.statistic == pytest.approx(raw / math.log(64))

    def test_scaling_mc(self):
        (row,) = scaling_table((2, 3), 1, [32], M=2000, seed=3)
        assert row.method == "monte-carlo"
        assert row.raw == lp_mc(halton((2, 3), 0, 32), 1, 2000, 3).raw

    def test_scaling_rejects_small_n(self):
        with pytest.raises(ValueError):
            scaling_table((2, 3), 2, [1])

    def test_ratio_p2(self):
        (row,) = ratio_table("hammersley", (2, 3), 2, [128], 50_000, 0)
        assert row.target == 1.0
        assert abs(row.deviation) < 4 * row.stderr

    def test_ratio_target(self):
        (row,) = ratio_table("hammersley", (2,), 4, [16], 1000, 0)
        assert row.target == pytest.approx(3**0.25)
