import math

import numpy as np
import pytest
from scipy import special, stats

from statfidelity_common.exceptions import DomainError
from statfidelity_common.models.statistic import StatKind, Tails, TestStatistic
from statfidelity.kernel import (chi_square_upper_tail, f_upper_tail, normal_two_tailed, p_from_statistic,
                                 p_interval, pearson_r_two_tailed, regularized_incomplete_beta,
                                 regularized_incomplete_gamma_lower, regularized_incomplete_gamma_upper,
                                 student_t_two_tailed)


class TestSpecialFunctions:
    def test_beta_closed_forms(self):
        # I_x(1, 1) = x and I_x(a, 1) = x^a
        for x in (0.0, 0.1, 0.37, 0.9, 1.0):
            assert regularized_incomplete_beta(1, 1, x) == pytest.approx(x, abs=1e-14)
            assert regularized_incomplete_beta(3.5, 1, x) == pytest.approx(x ** 3.5, abs=1e-14)

    def test_beta_symmetry(self):
        for a, b, x in [(2.0, 5.0, 0.3), (0.5, 12.0, 0.9), (40.0, 3.0, 0.6)]:
            total = regularized_incomplete_beta(a, b, x) + regularized_incomplete_beta(b, a, 1 - x)
            assert total == pytest.approx(1.0, abs=1e-12)

    def test_beta_against_scipy_grid(self):
        rng = np.random.default_rng(7)
        for _ in range(1000):
            a, b = rng.uniform(0.5, 200.0, size=2)
            x = rng.uniform(0.0, 1.0)
            assert regularized_incomplete_beta(a, b, x) == pytest.approx(special.betainc(a, b, x), abs=1e-10)

    def test_beta_example(self):
        assert regularized_incomplete_beta(12, 0.5, 0.9) == pytest.approx(special.betainc(12, 0.5, 0.9), abs=1e-12)

    def test_gamma_closed_forms(self):
        # P(1, x) = 1 - exp(-x)
        for x in (0.0, 0.5, 2.0, 10.0, 40.0):
            assert regularized_incomplete_gamma_lower(1, x) == pytest.approx(-math.expm1(-x), abs=1e-14)
            assert regularized_incomplete_gamma_upper(1, x) == pytest.approx(math.exp(-x), rel=1e-12)

    def test_gamma_complement(self):
        for s, x in [(0.5, 0.2), (3.0, 4.0), (150.0, 140.0), (7.5, 30.0)]:
            total = regularized_incomplete_gamma_lower(s, x) + regularized_incomplete_gamma_upper(s, x)
            assert total == pytest.approx(1.0, abs=1e-12)

    def test_gamma_against_scipy_grid(self):
        rng = np.random.default_rng(11)
        for _ in range(1000):
            s = rng.uniform(0.5, 200.0)
            x = rng.uniform(0.0, 2.5 * s)
            assert regularized_incomplete_gamma_lower(s, x) == pytest.approx(special.gammainc(s, x), abs=1e-10)
            assert regularized_incomplete_gamma_upper(s, x) == pytest.approx(special.gammaincc(s, x), abs=1e-10)

    @pytest.mark.parametrize("a, b, x", [(0, 1, 0.5), (1, -2, 0.5), (1, 1, 1.5), (1, 1, -0.1)])
    def test_beta_domain(self, a, b, x):
        with pytest.raises(DomainError):
            regularized_incomplete_beta(a, b, x)

    @pytest.mark.parametrize("s, x", [(0, 1), (-1, 1), (1, -0.5)])
    def test_gamma_domain(self, s, x):
        with pytest.raises(DomainError):
            regularized_incomplete_gamma_lower(s, x)


class TestTailProbabilities:
    def test_reported_examples(self):
        assert student_t_two_tailed(6.00, 2) == pytest.approx(0.02667, abs=5e-6)
        assert student_t_two_tailed(2.52, 24) == pytest.approx(0.0188, abs=5e-5)
        assert chi_square_upper_tail(0.197, 2) == pytest.approx(0.906, abs=5e-4)

    def test_closed_forms(self):
        # t(2): 1 - t / sqrt(2 + t^2); chi-square(2): exp(-x/2); t(1): Cauchy
        for t in (0.5, 3.0, 6.0, 40.0):
            assert student_t_two_tailed(t, 2) == pytest.approx(1 - t / math.sqrt(2 + t * t), rel=1e-10)
            assert student_t_two_tailed(t, 1) == pytest.approx(2 / math.pi * math.atan(1 / t), rel=1e-10)
        for x in (0.1, 6.0, 30.0):
            assert chi_square_upper_tail(x, 2) == pytest.approx(math.exp(-x / 2), rel=1e-10)
        assert pearson_r_two_tailed(0.98, 4) == pytest.approx(0.02, rel=1e-9)

    def test_against_scipy(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            df1, df2 = rng.uniform(1, 300, size=2)
            v = rng.uniform(0, 8)
            assert student_t_two_tailed(v, df1) == pytest.approx(2 * stats.t.sf(v, df1), rel=1e-8, abs=1e-300)
            assert f_upper_tail(v, df1, df2) == pytest.approx(stats.f.sf(v, df1, df2), rel=1e-8, abs=1e-300)
            assert chi_square_upper_tail(v * 10, df1) == pytest.approx(stats.chi2.sf(v * 10, df1), rel=1e-8,
                                                                       abs=1e-300)
            assert normal_two_tailed(v) == pytest.approx(2 * stats.norm.sf(v), rel=1e-8, abs=1e-300)

    def test_small_p_keeps_relative_precision(self):
        assert normal_two_tailed(12.0) == pytest.approx(2 * stats.norm.sf(12.0), rel=1e-8)
        assert student_t_two_tailed(50.0, 30) == pytest.approx(2 * stats.t.sf(50.0, 30), rel=1e-8)

    def test_edges(self):
        assert student_t_two_tailed(0.0, 10) == pytest.approx(1.0)
        assert normal_two_tailed(0.0) == 1.0
        assert chi_square_upper_tail(0.0, 3) == 1.0
        assert f_upper_tail(0.0, 2, 10) == pytest.approx(1.0)
        assert student_t_two_tailed(math.inf, 5) == 0.0
        assert student_t_two_tailed(-2.52, 24) == student_t_two_tailed(2.52, 24)

    def test_monotone_in_magnitude(self):
        values = np.linspace(0, 6, 61)
        for fn in (lambda v: student_t_two_tailed(v, 7), lambda v: normal_two_tailed(v),
                   lambda v: chi_square_upper_tail(v, 3), lambda v: f_upper_tail(v, 3, 20)):
            ps = [fn(v) for v in values]
            assert all(a >= b for a, b in zip(ps, ps[1:]))


class TestPFromStatistic:
    def test_one_tailed_halves(self):
        two = TestStatistic(kind=StatKind.STUDENT_T, value=2.52, df1=24)
        one = two.model_copy(update={"tails": Tails.ONE})
        assert p_from_statistic(one) == pytest.approx(p_from_statistic(two) / 2, rel=1e-12)

    def test_one_tailed_ignored_for_f_and_chi(self):
        f = TestStatistic(kind=StatKind.F, value=5.0, df1=2, df2=10, tails=Tails.ONE)
        assert p_from_statistic(f) == pytest.approx(0.03125, rel=1e-9)

    def test_r_uses_n_minus_two(self):
        r = TestStatistic(kind=StatKind.PEARSON_R, value=-0.5, n=4)
        assert p_from_statistic(r) == pytest.approx(0.5, rel=1e-9)

    def test_invalid_statistic_rejected(self):
        bad = TestStatistic.model_construct(kind=StatKind.F, value=-1.0, df1=2.0, df2=10.0, n=None,
                                            tails=Tails.TWO)
        with pytest.raises(DomainError):
            p_from_statistic(bad)

    def test_interval_folds_signed_values(self):
        stat = TestStatistic(kind=StatKind.STUDENT_T, value=-6.0, df1=2)
        lo, hi = p_interval(stat, -6.005, -5.995)
        assert lo == pytest.approx(student_t_two_tailed(6.005, 2))
        assert hi == pytest.approx(student_t_two_tailed(5.995, 2))
        lo, hi = p_interval(stat, -0.05, 0.05)
        assert hi == pytest.approx(1.0)

    def test_interval_rejects_empty(self):
        stat = TestStatistic(kind=StatKind.Z, value=1.0)
        with pytest.raises(DomainError):
            p_interval(stat, 2.0, 1.0)
