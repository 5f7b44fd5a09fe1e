"""
Rounding-tolerant consistency check of single reports.

A report is consistent when the p-values allowed by its printed p
(a rounding interval, or a half-line for <, >, <=, >=) intersect the
p-values recomputed over the rounding interval of its printed statistic.
"""
import math
from dataclasses import dataclass
from typing import Optional, Tuple

from statfidelity_common.models.outcomes import CheckConfig, EvaluatedTest, Outcome, SignificanceClaim
from statfidelity_common.models.reports import RawReport, Relation
from statfidelity_common.models.statistic import StatKind, Tails
from statfidelity.check.rounding import rounding_interval
from statfidelity.extract.scanner import detect_one_tailed_context
from statfidelity.kernel.distributions import p_interval

ONE_TAILED_KINDS = (StatKind.STUDENT_T, StatKind.Z, StatKind.PEARSON_R)


@dataclass(frozen=True)
class PConstraint:
    """Set of p-values a report admits: [lo, hi] with optionally open ends."""
    lo: float
    hi: float
    lo_open: bool = False
    hi_open: bool = False

    def intersects(self, lo: float, hi: float) -> bool:
        above_lo = hi > self.lo or (hi == self.lo and not self.lo_open)
        below_hi = lo < self.hi or (lo == self.hi and not self.hi_open)
        return above_lo and below_hi

    def claim(self, alpha: float) -> SignificanceClaim:
        if self.hi < alpha or (self.hi == alpha and self.hi_open):
            return SignificanceClaim.SIGNIFICANT
        if self.lo >= alpha:
            return SignificanceClaim.NON_SIGNIFICANT
        return SignificanceClaim.NO_CLAIM


def reported_constraint(raw: RawReport) -> PConstraint:
    """The p-values compatible with the printed p clause."""
    op, v = raw.p_operator, raw.p_value
    if op == Relation.EQ:
        lo, hi = rounding_interval(raw.p_text, 0.0, 1.0)
        return PConstraint(lo, hi, hi_open=hi < 1.0)
    if op == Relation.LT:
        return PConstraint(0.0, v, hi_open=True)
    if op == Relation.LEQ:
        return PConstraint(0.0, v)
    if op == Relation.GT:
        return PConstraint(v, 1.0, lo_open=True)
    return PConstraint(v, 1.0)


def statistic_interval(raw: RawReport) -> Tuple[float, float]:
    """Statistic values compatible with the printed statistic clause."""
    stat = raw.statistic
    lower = 0.0 if stat.kind in (StatKind.F, StatKind.CHI_SQ) else None
    lo, hi = rounding_interval(raw.statistic_text, lower)
    if stat.kind == StatKind.PEARSON_R:
        lo, hi = max(lo, -1.0), min(hi, 1.0)
    signed = stat.kind in ONE_TAILED_KINDS
    op = raw.statistic_operator
    if op in (Relation.LT, Relation.LEQ):
        # |statistic| below the bound
        bound = max(abs(lo), abs(hi)) if signed else hi
        return (0.0, bound)
    if op in (Relation.GT, Relation.GEQ):
        bound = min(abs(lo), abs(hi)) if signed and lo * hi > 0 else (0.0 if signed else lo)
        return (bound, 1.0 if stat.kind == StatKind.PEARSON_R else math.inf)
    return lo, hi


def recomputed_claim(lo: float, hi: float, alpha: float) -> SignificanceClaim:
    if hi < alpha:
        return SignificanceClaim.SIGNIFICANT
    if lo >= alpha:
        return SignificanceClaim.NON_SIGNIFICANT
    return SignificanceClaim.NO_CLAIM


def evaluate_test(raw: RawReport, cfg: Optional[CheckConfig] = None) -> EvaluatedTest:
    """
    Classify one report as CorrectNHST, Inconsistency or DecisionError.

    Raises:
        DomainError: from the kernel; callers turn it into a per-test diagnostic
    """
    cfg = cfg or CheckConfig()
    stat_lo, stat_hi = statistic_interval(raw)
    two_tailed = raw.statistic.model_copy(update={"tails": Tails.TWO})
    p_lo, p_hi = p_interval(two_tailed, stat_lo, stat_hi)
    reported = reported_constraint(raw)

    tails = Tails.TWO
    one_tailed_applied = False
    consistent = reported.intersects(p_lo, p_hi)
    used_lo, used_hi = p_lo, p_hi
    if (not consistent and cfg.one_tailed_detection and raw.statistic.kind in ONE_TAILED_KINDS
            and detect_one_tailed_context(raw.context, cfg.one_tailed_keywords)):
        half_lo, half_hi = p_lo / 2.0, p_hi / 2.0
        if reported.intersects(half_lo, half_hi):
            consistent, one_tailed_applied, tails = True, True, Tails.ONE
            used_lo, used_hi = half_lo, half_hi

    reported_claim = reported.claim(cfg.alpha)
    computed_claim = recomputed_claim(p_lo, p_hi, cfg.alpha)
    mcc_suppressed = False
    if consistent:
        outcome = Outcome.CORRECT_NHST
    elif (reported_claim != SignificanceClaim.NO_CLAIM and computed_claim != SignificanceClaim.NO_CLAIM
          and reported_claim != computed_claim):
        if cfg.mcc_used:
            outcome, mcc_suppressed = Outcome.INCONSISTENCY, True
        else:
            outcome = Outcome.DECISION_ERROR
    else:
        outcome = Outcome.INCONSISTENCY

    p_difference = None
    if raw.p_operator == Relation.EQ:
        p_difference = raw.p_value - (used_lo + used_hi) / 2.0

    return EvaluatedTest(
        raw=raw,
        recomputed_p_lo=used_lo,
        recomputed_p_hi=used_hi,
        outcome=outcome,
        one_tailed_applied=one_tailed_applied,
        tails=tails,
        p_difference=p_difference,
        reported_p_lo=reported.lo,
        reported_p_hi=reported.hi,
        reported_claim=reported_claim,
        recomputed_claim=recomputed_claim(used_lo, used_hi, cfg.alpha) if one_tailed_applied else computed_claim,
        mcc_suppressed=mcc_suppressed,
    )
