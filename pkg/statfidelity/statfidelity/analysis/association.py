"""
Association tests on contingency tables: Pearson chi-square, the
Monte-Carlo Fisher exact test and Cramér's V with its confidence interval.
"""
import math
from typing import List, Optional, Tuple

import numpy as np
from scipy import optimize, stats
from scipy.special import gammaln

from statfidelity_common.config import get_config
from statfidelity_common.exceptions import DegenerateTableError, DomainError, require
from statfidelity_common.logger_config import logger
from statfidelity_common.models.corpus import AssociationMethod, AssociationResult, ContingencyTable
from statfidelity_common.models.outcomes import BOOTSTRAP_CI_METHODS, CI_METHODS, CheckConfig
from statfidelity.analysis.sampling import (replicate_blocks, resample_tables, run_blocks, sample_tables,
                                            table_log_statistic)
from statfidelity.kernel.distributions import chi_square_upper_tail

# Relative slack when comparing log table probabilities
LOG_PROB_SLACK = 1e-12


def _observed(table: ContingencyTable) -> np.ndarray:
    obs = table.as_array()
    require(bool((obs.sum(axis=1) > 0).all() and (obs.sum(axis=0) > 0).all()), DegenerateTableError,
            "Contingency table has a zero row or column margin")
    return obs


def _expected(obs: np.ndarray) -> np.ndarray:
    return np.outer(obs.sum(axis=1), obs.sum(axis=0)) / obs.sum()


def _chi_square(obs: np.ndarray) -> float:
    expected = _expected(obs)
    return float(((obs - expected) ** 2 / expected).sum())


def cramers_v(table: ContingencyTable) -> float:
    """sqrt(chi^2 / (n * min(r-1, c-1))) for a table with positive margins."""
    obs = _observed(table)
    r, c = obs.shape
    return min(1.0, math.sqrt(_chi_square(obs) / (obs.sum() * min(r - 1, c - 1))))


def _cramers_v_batch(tables: np.ndarray) -> np.ndarray:
    """V for a stack of tables; zero margins are dropped per table."""
    tables = tables.astype(float)
    n = tables.sum(axis=(1, 2))
    rows = tables.sum(axis=2)
    cols = tables.sum(axis=1)
    expected = rows[:, :, None] * cols[:, None, :] / n[:, None, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(expected > 0, (tables - expected) ** 2 / expected, 0.0)
    chi2 = terms.sum(axis=(1, 2))
    k = np.minimum((rows > 0).sum(axis=1), (cols > 0).sum(axis=1)) - 1
    with np.errstate(divide="ignore", invalid="ignore"):
        v = np.where(k > 0, np.sqrt(chi2 / (n * np.maximum(k, 1))), 0.0)
    return np.clip(v, 0.0, 1.0)


def _noncentral_bound(chi2: float, df: int, target: float) -> float:
    """Noncentrality at which P(X <= chi2) = target for X ~ ncx2(df, lambda); 0 when none exists."""
    if chi2 <= 0.0 or stats.chi2.cdf(chi2, df) <= target:
        return 0.0

    def excess(lam: float) -> float:
        cdf = stats.ncx2.cdf(chi2, df, lam) if lam > 0.0 else stats.chi2.cdf(chi2, df)
        return float(cdf) - target

    hi = max(10.0, 2.0 * chi2)
    while excess(hi) > 0.0:
        hi *= 2.0
    return float(optimize.brentq(excess, 0.0, hi, xtol=1e-10))


def _noncentral_ci(obs: np.ndarray, confidence: float) -> Tuple[float, float]:
    r, c = obs.shape
    chi2 = _chi_square(obs)
    scale = obs.sum() * min(r - 1, c - 1)
    tail = (1.0 - confidence) / 2.0
    lam_lo = _noncentral_bound(chi2, (r - 1) * (c - 1), 1.0 - tail)
    lam_hi = _noncentral_bound(chi2, (r - 1) * (c - 1), tail)
    return min(1.0, math.sqrt(lam_lo / scale)), min(1.0, math.sqrt(lam_hi / scale))


def cramers_v_ci(table: ContingencyTable, bootstrap_replicates: Optional[int] = None,
                 seed: Optional[int] = None, method: Optional[str] = None,
                 confidence: float = 0.95, workers: int = 1) -> Tuple[float, float]:
    """
    Confidence interval for Cramér's V.

    ``method`` "noncentral" inverts the noncentral chi-square distribution of
    the statistic: the bounds are sqrt(lambda / (n * min(r-1, c-1))) for the
    noncentralities placing the observed chi^2 at the upper and lower tail
    quantiles. "basic" and "percentile" bootstrap multinomial resamples of
    the cells; "basic" reflects the quantiles around V (2V - q), "percentile"
    returns them. Every interval is clamped to [0, 1] and widened to contain V.

    Raises:
        DegenerateTableError: grand total below 2 or a zero margin
    """
    settings = get_config()
    method = method or settings.get("CI_METHOD", "noncentral")
    require(method in CI_METHODS, DomainError, f"Unknown CI method {method!r}")
    require(table.total >= 2, DegenerateTableError, "Cramér's V interval needs at least two observations")

    v = cramers_v(table)
    obs = table.as_array()
    if method == "noncentral":
        lo, hi = _noncentral_ci(_observed(table), confidence)
        return min(lo, v), max(hi, v)

    bootstrap_replicates = bootstrap_replicates or int(settings.get("BOOTSTRAP_REPLICATES", 10000))
    seed = int(settings.get("SEED", 42)) if seed is None else seed
    blocks = replicate_blocks(bootstrap_replicates, seed)
    v_star = np.concatenate(run_blocks(blocks, lambda rng, size: _cramers_v_batch(resample_tables(obs, size, rng)),
                                       workers))
    tail = (1.0 - confidence) / 2.0
    q_lo, q_hi = np.quantile(v_star, [tail, 1.0 - tail])
    if method == "basic":
        lo, hi = 2.0 * v - q_hi, 2.0 * v - q_lo
    else:
        lo, hi = q_lo, q_hi
    lo, hi = float(np.clip(lo, 0.0, 1.0)), float(np.clip(hi, 0.0, 1.0))
    return min(lo, v), max(hi, v)


def _resolve(cfg: Optional[CheckConfig]) -> CheckConfig:
    return cfg or CheckConfig.from_settings()


def chisq_independence(table: ContingencyTable, cfg: Optional[CheckConfig] = None) -> AssociationResult:
    """
    Pearson chi-square test of independence with Cramér's V.

    Raises:
        DegenerateTableError: on a zero margin
    """
    cfg = _resolve(cfg)
    obs = _observed(table)
    r, c = obs.shape
    chi2 = _chi_square(obs)
    df = (r - 1) * (c - 1)
    warnings: List[str] = []
    min_expected = float(_expected(obs).min())
    threshold = float(get_config().get("MIN_EXPECTED_COUNT", 5))
    if min_expected < threshold:
        message = f"expected count {min_expected:.2f} below {threshold:g}; chi-square approximation may be poor"
        logger.warning(message)
        warnings.append(message)
    v = cramers_v(table)
    lo, hi = cramers_v_ci(table, cfg.bootstrap_replicates, cfg.seed, cfg.ci_method, workers=cfg.workers)
    return AssociationResult(method=AssociationMethod.CHI_SQUARE, statistic=chi2, df=df,
                             p=chi_square_upper_tail(chi2, df), cramers_v=v, v_ci_lo=lo, v_ci_hi=hi,
                             warnings=warnings)


def fisher_exact_mc(table: ContingencyTable, replicates: Optional[int] = None, seed: Optional[int] = None,
                    cfg: Optional[CheckConfig] = None) -> AssociationResult:
    """
    Fisher's exact test for an r x c table by Monte-Carlo simulation.

    p = (1 + #{simulated tables at most as probable as the observed}) / (B + 1).
    The replicate stream depends on ``seed`` only, not on the worker count.

    Raises:
        DegenerateTableError: on a zero margin
        DomainError: for fewer than 1000 replicates
    """
    cfg = _resolve(cfg)
    replicates = cfg.replicates if replicates is None else replicates
    seed = cfg.seed if seed is None else seed
    require(replicates >= 1000, DomainError, f"Monte-Carlo Fisher test needs >= 1000 replicates, got {replicates}")
    obs = _observed(table)
    row_sums, col_sums = obs.sum(axis=1), obs.sum(axis=0)
    observed_stat = float(table_log_statistic(obs))
    cutoff = observed_stat + LOG_PROB_SLACK * max(1.0, abs(observed_stat))

    def _count(rng, size):
        return int((table_log_statistic(sample_tables(row_sums, col_sums, size, rng)) <= cutoff).sum())

    count = sum(run_blocks(replicate_blocks(replicates, seed), _count, cfg.workers))
    p = (1.0 + count) / (replicates + 1.0)
    se = math.sqrt(p * (1.0 - p) / replicates)
    v = cramers_v(table)
    # Monte-Carlo Fisher tables always bootstrap the interval
    method = cfg.ci_method if cfg.ci_method in BOOTSTRAP_CI_METHODS else "basic"
    lo, hi = cramers_v_ci(table, cfg.bootstrap_replicates, seed, method, workers=cfg.workers)
    logger.debug(f"Fisher MC: {count}/{replicates} tables as extreme, p={p:.4f} (se {se:.4f})")
    return AssociationResult(method=AssociationMethod.FISHER_MC, p=p, cramers_v=v, v_ci_lo=lo, v_ci_hi=hi,
                             mc_standard_error=se, replicates=replicates)


def exact_fisher_2x2(table: ContingencyTable) -> float:
    """Two-sided exact Fisher p for a 2 x 2 table by full enumeration."""
    obs = _observed(table)
    require(obs.shape == (2, 2), DomainError, f"Exact enumeration needs a 2x2 table, got {obs.shape}")
    (a, b), (c, d) = obs.tolist()
    r1, c1, n = a + b, a + c, a + b + c + d
    support = np.arange(max(0, r1 + c1 - n), min(r1, c1) + 1)
    log_pmf = (gammaln(r1 + 1) + gammaln(n - r1 + 1) + gammaln(c1 + 1) + gammaln(n - c1 + 1) - gammaln(n + 1)
               - gammaln(support + 1) - gammaln(r1 - support + 1) - gammaln(c1 - support + 1)
               - gammaln(n - r1 - c1 + support + 1))
    pmf = np.exp(log_pmf)
    observed = pmf[a - support[0]]
    return float(min(1.0, pmf[pmf <= observed * (1.0 + 1e-7)].sum()))


def associate(table: ContingencyTable, cfg: Optional[CheckConfig] = None,
              min_expected: Optional[float] = None) -> AssociationResult:
    """Chi-square, or the Monte-Carlo Fisher test when any expected count is small."""
    cfg = _resolve(cfg)
    threshold = float(get_config().get("MIN_EXPECTED_COUNT", 5) if min_expected is None else min_expected)
    smallest = float(_expected(_observed(table)).min())
    if smallest < threshold:
        message = f"expected count {smallest:.2f} below {threshold:g}; using Monte-Carlo Fisher exact test"
        logger.info(message)
        result = fisher_exact_mc(table, cfg=cfg)
        return result.model_copy(update={"warnings": result.warnings + [message]})
    return chisq_independence(table, cfg)
