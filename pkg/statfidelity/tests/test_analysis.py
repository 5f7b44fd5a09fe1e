import math
import random

import numpy as np
import pytest
from scipy import stats

from statfidelity_common.exceptions import DegenerateTableError, DomainError, EmptyInputError
from statfidelity_common.models.corpus import AssociationMethod
from statfidelity_common.models.outcomes import CheckConfig
from statfidelity.analysis import (associate, build_contingency, chisq_independence, confusion_metrics,
                                   cramers_v, cramers_v_ci, exact_fisher_2x2, fisher_exact_mc,
                                   proportions_by_year)
from statfidelity.analysis.sampling import replicate_blocks, sample_tables

from .conftest import (JMP_COMPARISON, JMP_RESTRICTED, OUTCOMES, PAPER_BY_VENUE, PAPER_BY_YEAR, TEST_BY_VENUE,
                       VENUES, YEARS, table)


class TestContingency:
    def test_paper_tables_rebuilt(self, paper_records):
        by_year = build_contingency(paper_records, "outcome", "year", col_levels=YEARS)
        by_venue = build_contingency(paper_records, "outcome", "venue", col_levels=VENUES)
        assert by_year.row_labels == OUTCOMES
        assert by_year.counts == PAPER_BY_YEAR
        assert by_venue.counts == PAPER_BY_VENUE
        assert by_year.total == 114

    def test_venue_by_year(self, paper_records):
        venue_year = build_contingency(paper_records, "venue", "year", row_levels=VENUES, col_levels=YEARS)
        assert sum(venue_year.counts[0]) == 77
        assert venue_year.total == 114

    def test_test_level_table(self, test_level_records):
        by_venue = build_contingency(test_level_records, "outcome", "venue", col_levels=VENUES)
        assert by_venue.counts == TEST_BY_VENUE
        assert by_venue.counts[0][0] == 170

    def test_record_order_irrelevant(self, paper_records):
        shuffled = list(paper_records)
        random.Random(1).shuffle(shuffled)
        a = build_contingency(paper_records, "outcome", "venue")
        b = build_contingency(shuffled, "outcome", "venue")
        assert a == b

    def test_unobserved_levels_are_zero(self, paper_records):
        t = build_contingency(paper_records, "outcome", "year", col_levels=YEARS + [2017])
        assert [row[-1] for row in t.counts] == [0, 0, 0, 0]

    def test_callable_dimension(self, paper_records):
        t = build_contingency(paper_records, "outcome", lambda r: r.venue == "SOUPS")
        assert t.col_labels == ["False", "True"]

    def test_empty_and_degenerate(self, paper_records):
        with pytest.raises(EmptyInputError):
            build_contingency([], "outcome", "venue")
        with pytest.raises(DegenerateTableError):
            build_contingency(paper_records[:1], "outcome", "venue")


class TestChiSquare:
    def test_comparison_table(self):
        cfg = CheckConfig(bootstrap_replicates=10000, seed=42, ci_method="noncentral")
        result = chisq_independence(table(JMP_COMPARISON), cfg)
        assert result.method == AssociationMethod.CHI_SQUARE
        assert result.statistic == pytest.approx(88.803, abs=0.01)
        assert result.df == 3
        assert result.p < 1e-15
        assert result.cramers_v == pytest.approx(0.646, abs=0.002)
        assert result.v_ci_lo == pytest.approx(0.503, abs=0.03)
        assert result.v_ci_hi == pytest.approx(0.773, abs=0.03)

    def test_restricted_table(self):
        cfg = CheckConfig(bootstrap_replicates=10000, seed=42)
        result = chisq_independence(table(JMP_RESTRICTED), cfg)
        assert result.statistic == pytest.approx(0.197, abs=0.005)
        assert result.df == 2
        assert result.p == pytest.approx(0.906, abs=0.002)
        assert result.cramers_v == pytest.approx(0.037, abs=0.002)
        assert result.v_ci_lo == 0.0

    def test_identical_rows(self, small_cfg):
        result = chisq_independence(table([[10, 20, 30], [10, 20, 30]]), small_cfg)
        assert result.statistic == 0.0
        assert result.p == 1.0
        assert result.cramers_v == 0.0
        assert result.v_ci_lo == 0.0

    def test_matches_scipy(self, small_cfg):
        counts = [[12, 5, 9], [3, 14, 8], [7, 7, 20]]
        result = chisq_independence(table(counts), small_cfg)
        expected = stats.chi2_contingency(np.array(counts), correction=False)
        assert result.statistic == pytest.approx(expected[0], rel=1e-10)
        assert result.p == pytest.approx(expected[1], rel=1e-8)

    def test_transpose_invariant(self, small_cfg):
        t = table([[12, 5, 9], [3, 14, 8]])
        a, b = chisq_independence(t, small_cfg), chisq_independence(t.transpose(), small_cfg)
        assert a.statistic == pytest.approx(b.statistic)
        assert a.cramers_v == pytest.approx(b.cramers_v)

    def test_small_expected_warns(self, small_cfg):
        result = chisq_independence(table([[3, 1], [1, 3]]), small_cfg)
        assert result.warnings

    def test_zero_margin(self, small_cfg):
        with pytest.raises(DegenerateTableError):
            chisq_independence(table([[0, 0], [3, 4]]), small_cfg)


class TestFisherMonteCarlo:
    def test_paper_by_venue_tests(self):
        cfg = CheckConfig(replicates=100000, bootstrap_replicates=2000, seed=42)
        result = fisher_exact_mc(table(TEST_BY_VENUE), cfg=cfg)
        assert result.method == AssociationMethod.FISHER_MC
        se = result.mc_standard_error
        # the published value carries its own simulation error
        assert abs(result.p - 0.033) <= 3 * math.sqrt(2) * se

    def test_paper_by_venue_papers(self):
        cfg = CheckConfig(replicates=100000, bootstrap_replicates=2000, seed=42)
        result = fisher_exact_mc(table(PAPER_BY_VENUE), cfg=cfg)
        assert abs(result.p - 0.964) <= 3 * math.sqrt(2) * result.mc_standard_error

    def test_two_by_two_against_enumeration(self, small_cfg):
        t = table([[3, 1], [1, 3]])
        exact = exact_fisher_2x2(t)
        assert exact == pytest.approx(34 / 70)
        result = fisher_exact_mc(t, cfg=small_cfg)
        assert abs(result.p - exact) <= 3 * result.mc_standard_error

    def test_random_two_by_two(self):
        rng = np.random.default_rng(23)
        cfg = CheckConfig(replicates=20000, bootstrap_replicates=200, seed=5)
        for _ in range(50):
            counts = rng.integers(1, 15, size=(2, 2)).tolist()
            t = table(counts)
            exact = exact_fisher_2x2(t)
            assert exact == pytest.approx(stats.fisher_exact(counts)[1], rel=1e-6)
            result = fisher_exact_mc(t, cfg=cfg)
            assert abs(result.p - exact) <= 4 * result.mc_standard_error + 1.0 / 20001

    def test_seed_determinism_and_workers(self, small_cfg):
        t = table(PAPER_BY_VENUE)
        a = fisher_exact_mc(t, cfg=small_cfg)
        b = fisher_exact_mc(t, cfg=small_cfg.model_copy(update={"workers": 3}))
        assert a.p == b.p
        assert a.v_ci_lo == b.v_ci_lo and a.v_ci_hi == b.v_ci_hi

    def test_other_seed_agrees(self, small_cfg):
        t = table(PAPER_BY_VENUE)
        a = fisher_exact_mc(t, cfg=small_cfg)
        b = fisher_exact_mc(t, seed=7, cfg=small_cfg)
        assert abs(a.p - b.p) <= 4 * math.sqrt(2) * a.mc_standard_error

    def test_too_few_replicates(self, small_cfg):
        with pytest.raises(DomainError):
            fisher_exact_mc(table([[3, 1], [1, 3]]), replicates=999, cfg=small_cfg)

    def test_sampled_tables_keep_margins(self):
        rows, cols = [5, 7, 3], [4, 4, 7]
        tables = sample_tables(rows, cols, 500, np.random.default_rng(0))
        assert (tables >= 0).all()
        assert (tables.sum(axis=2) == rows).all()
        assert (tables.sum(axis=1) == cols).all()

    def test_blocks_cover_replicates(self):
        blocks = replicate_blocks(25001, seed=1, block_size=10000)
        assert [size for _, size in blocks] == [10000, 10000, 5001]


class TestCramersV:
    def test_perfect_association(self):
        assert cramers_v(table([[10, 0], [0, 10]])) == pytest.approx(1.0)

    def test_interval_contains_v(self):
        rng = np.random.default_rng(4)
        for _ in range(10):
            t = table(rng.integers(1, 30, size=(3, 4)).tolist())
            v = cramers_v(t)
            for method in ("basic", "noncentral"):
                lo, hi = cramers_v_ci(t, bootstrap_replicates=500, seed=1, method=method)
                assert 0.0 <= lo <= v <= hi <= 1.0

    def test_percentile_method(self):
        t = table(JMP_COMPARISON)
        lo, hi = cramers_v_ci(t, bootstrap_replicates=2000, seed=1, method="percentile")
        assert lo <= cramers_v(t) <= hi

    def test_noncentral_interval(self):
        lo, hi = cramers_v_ci(table(JMP_COMPARISON), method="noncentral")
        assert lo == pytest.approx(0.5032, abs=0.001)
        assert hi == pytest.approx(0.7733, abs=0.001)

    def test_noncentral_bounds_solve_tail_equations(self):
        t = table(JMP_COMPARISON)
        lo, hi = cramers_v_ci(t, method="noncentral")
        chi2, scale = 88.803, t.total * 1
        assert stats.ncx2.cdf(chi2, 3, lo ** 2 * scale) == pytest.approx(0.975, abs=1e-3)
        assert stats.ncx2.cdf(chi2, 3, hi ** 2 * scale) == pytest.approx(0.025, abs=1e-3)

    def test_noncentral_lower_bound_zero_for_weak_association(self):
        lo, hi = cramers_v_ci(table(JMP_RESTRICTED), method="noncentral")
        assert lo == 0.0
        assert hi > cramers_v(table(JMP_RESTRICTED))
        assert cramers_v_ci(table([[10, 20], [10, 20]]), method="noncentral") == (0.0, 0.0)

    def test_bootstrap_narrower_than_noncentral(self):
        t = table(JMP_COMPARISON)
        nc_lo, nc_hi = cramers_v_ci(t, method="noncentral")
        bs_lo, bs_hi = cramers_v_ci(t, bootstrap_replicates=2000, seed=1, method="basic")
        assert bs_hi - bs_lo < nc_hi - nc_lo

    def test_unknown_method(self):
        with pytest.raises(DomainError):
            cramers_v_ci(table(JMP_COMPARISON), bootstrap_replicates=100, seed=1, method="bca")


class TestAssociate:
    def test_large_counts_use_chi_square(self, small_cfg):
        assert associate(table(JMP_COMPARISON), small_cfg).method == AssociationMethod.CHI_SQUARE

    def test_small_counts_use_fisher(self, small_cfg):
        result = associate(table([[3, 1], [1, 3]]), small_cfg)
        assert result.method == AssociationMethod.FISHER_MC
        assert result.df is None
        assert result.warnings


class TestConfusion:
    def test_error_detection_agreement(self):
        m = confusion_metrics(29, 5, 0, 218)
        assert round(m.accuracy, 2) == 0.98
        assert (round(m.acc_ci_lo, 2), round(m.acc_ci_hi, 2)) == (0.95, 0.99)
        assert round(m.nir, 2) == 0.88
        assert m.p_acc_gt_nir < 0.001
        assert m.sensitivity == 1.0
        assert round(m.specificity, 2) == 0.98
        assert round(m.ppv, 2) == 0.85
        assert round(m.f1, 2) == 0.92

    def test_significance_agreement(self):
        m = confusion_metrics(191, 12, 1, 47)
        assert round(m.accuracy, 2) == 0.95
        assert (round(m.acc_ci_lo, 2), round(m.acc_ci_hi, 2)) == (0.91, 0.97)
        assert round(m.sensitivity, 2) == 0.99
        assert round(m.specificity, 2) == 0.80
        assert round(m.ppv, 2) == 0.94
        assert round(m.f1, 2) == 0.97

    def test_ci_matches_binomtest(self):
        m = confusion_metrics(191, 12, 1, 47)
        ci = stats.binomtest(238, 251).proportion_ci(confidence_level=0.95, method="exact")
        assert m.acc_ci_lo == pytest.approx(ci.low, rel=1e-9)
        assert m.acc_ci_hi == pytest.approx(ci.high, rel=1e-9)

    def test_f1_is_harmonic_mean(self):
        m = confusion_metrics(40, 10, 20, 30)
        assert m.f1 == pytest.approx(2 * m.ppv * m.sensitivity / (m.ppv + m.sensitivity), rel=1e-12)

    def test_undefined_ratios(self):
        m = confusion_metrics(1, 0, 0, 0)
        assert m.accuracy == 1.0
        assert m.f1 == 1.0
        assert m.specificity is None
        assert m.npv is None

    def test_invalid(self):
        with pytest.raises(DomainError):
            confusion_metrics(0, 0, 0, 0)
        with pytest.raises(DomainError):
            confusion_metrics(-1, 2, 3, 4)


class TestYearSeries:
    def test_shares_sum_to_one(self, paper_records):
        charts = {c.title: c for c in proportions_by_year(paper_records)}
        outcomes = charts["outcomes"]
        assert outcomes.x[0].data == YEARS
        for k in range(len(YEARS)):
            assert sum(s.data[k] for s in outcomes.y) == pytest.approx(1.0)
        # 2006: 2 correct, 2 inconsistent, 0 decision errors, 3 incomplete
        assert outcomes.y[0].data[0] == pytest.approx(2 / 7)
        assert set(charts) == {"outcomes", "mcc_used", "effect_sizes"}

    def test_empty(self):
        with pytest.raises(EmptyInputError):
            proportions_by_year([])
