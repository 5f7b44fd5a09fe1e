"""
p-values of the reference distributions behind t, F, chi-square, z and r.

Every tail is computed directly rather than as one minus a CDF so that
small p-values keep their relative precision.
"""
import math
from typing import Optional, Tuple

from pydantic import ValidationError

from statfidelity_common.exceptions import DomainError, require
from statfidelity_common.models.statistic import StatKind, Tails, TestStatistic
from statfidelity.kernel.special import (regularized_incomplete_beta_tail,
                                         regularized_incomplete_gamma_upper)

# Largest |r| treated as finite; beyond it the t transform overflows
_R_LIMIT = 1.0 - 1.0e-15


def _clamp(p: float) -> float:
    return min(1.0, max(0.0, p))


def student_t_two_tailed(t: float, df: float) -> float:
    """2 * (1 - CDF_t(|t|, df)) = I_{df/(df+t^2)}(df/2, 1/2)."""
    require(df > 0, DomainError, f"t requires df > 0, got {df}")
    t = abs(t)
    if math.isinf(t):
        return 0.0
    t2 = t * t
    return _clamp(regularized_incomplete_beta_tail(df / 2.0, 0.5, df / (df + t2), t2 / (df + t2)))


def f_upper_tail(f: float, df1: float, df2: float) -> float:
    """P(F > f) = I_{d2/(d2+d1 f)}(d2/2, d1/2)."""
    require(df1 > 0 and df2 > 0, DomainError, f"F requires positive df, got ({df1}, {df2})")
    require(f >= 0, DomainError, f"F must be non-negative, got {f}")
    if math.isinf(f):
        return 0.0
    denom = df2 + df1 * f
    return _clamp(regularized_incomplete_beta_tail(df2 / 2.0, df1 / 2.0, df2 / denom, df1 * f / denom))


def chi_square_upper_tail(x: float, df: float) -> float:
    """P(X > x) = Q(df/2, x/2)."""
    require(df > 0, DomainError, f"chi-square requires df > 0, got {df}")
    require(x >= 0, DomainError, f"chi-square must be non-negative, got {x}")
    return regularized_incomplete_gamma_upper(df / 2.0, x / 2.0)


def normal_two_tailed(z: float) -> float:
    """2 * Phi(-|z|) = Q(1/2, z^2/2)."""
    require(not math.isnan(z), DomainError, "z must be a number")
    return regularized_incomplete_gamma_upper(0.5, z * z / 2.0)


def pearson_r_two_tailed(r: float, n: int) -> float:
    """Convert r to t with n - 2 degrees of freedom, then as t."""
    require(n >= 3, DomainError, f"r requires n >= 3, got {n}")
    r = abs(r)
    if r >= _R_LIMIT:
        return 0.0
    df = float(n - 2)
    return student_t_two_tailed(r * math.sqrt(df / (1.0 - r * r)), df)


def _two_tailed(kind: StatKind, value: float, df1: Optional[float], df2: Optional[float],
                n: Optional[int]) -> float:
    if kind == StatKind.STUDENT_T:
        return student_t_two_tailed(value, df1)
    if kind == StatKind.F:
        return f_upper_tail(value, df1, df2)
    if kind == StatKind.CHI_SQ:
        return chi_square_upper_tail(value, df1)
    if kind == StatKind.Z:
        return normal_two_tailed(value)
    return pearson_r_two_tailed(value, n)


def _validated(stat: TestStatistic) -> TestStatistic:
    # model_construct() bypasses validation; re-check before computing
    try:
        return TestStatistic.model_validate(stat.model_dump())
    except ValidationError as e:
        raise DomainError(f"Invalid test statistic: {e.errors()[0]['msg']}")


def p_from_statistic(stat: TestStatistic) -> float:
    """
    Recompute the p-value of a reported statistic.

    t, z and r honour ``stat.tails``: one-tailed is half the two-tailed
    value. F and chi-square are always upper-tail probabilities.

    Raises:
        DomainError: when the statistic violates its invariants
    """
    stat = _validated(stat)
    p = _two_tailed(stat.kind, stat.value, stat.df1, stat.df2, stat.n)
    if stat.tails == Tails.ONE and stat.kind in (StatKind.STUDENT_T, StatKind.Z, StatKind.PEARSON_R):
        p /= 2.0
    return _clamp(p)


def p_interval(stat: TestStatistic, lo: float, hi: float) -> Tuple[float, float]:
    """
    Range of p-values over the statistic values in [lo, hi].

    Signed statistics (t, z, r) are folded to |value|; F and chi-square are
    clamped at 0 and r at its open domain. Endpoints may be infinite.
    """
    require(lo <= hi, DomainError, f"empty statistic interval [{lo}, {hi}]")
    stat = _validated(stat)
    if stat.kind in (StatKind.STUDENT_T, StatKind.Z, StatKind.PEARSON_R):
        if lo <= 0.0 <= hi:
            mag_lo, mag_hi = 0.0, max(abs(lo), abs(hi))
        else:
            mag_lo, mag_hi = sorted((abs(lo), abs(hi)))
    else:
        mag_lo, mag_hi = max(lo, 0.0), max(hi, 0.0)
    if stat.kind == StatKind.PEARSON_R:
        mag_lo, mag_hi = min(mag_lo, _R_LIMIT), min(mag_hi, _R_LIMIT)

    scale = 0.5 if stat.tails == Tails.ONE and stat.kind in (
        StatKind.STUDENT_T, StatKind.Z, StatKind.PEARSON_R) else 1.0
    # p decreases in the magnitude of the statistic
    p_lo = _two_tailed(stat.kind, mag_hi, stat.df1, stat.df2, stat.n) * scale
    p_hi = _two_tailed(stat.kind, mag_lo, stat.df1, stat.df2, stat.n) * scale
    return _clamp(p_lo), _clamp(p_hi)
