"""
Maximum-likelihood multinomial logit with a reference outcome level.

The fit runs on a standardised copy of the design (non-intercept columns
centred and scaled) and maps coefficients and covariance back to the
original columns, so raw-year models stay well conditioned.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import norm

from statfidelity_common.config import get_config
from statfidelity_common.exceptions import NotNestedError, UnknownLevelError, require
from statfidelity_common.logger_config import logger
from statfidelity_common.models.regression import (CoefficientRow, FitComparison, MLRModel, ObservationRow,
                                                   PredictorSpec)
from statfidelity.kernel.distributions import chi_square_upper_tail, normal_two_tailed
from statfidelity.regression.design import Design, build_design, check_full_rank

SCORE_TOLERANCE = 1e-8
RELATIVE_LL_TOLERANCE = 1e-12
MAX_ITERATIONS = 200
MAX_HALVINGS = 5


def _indicators(y: np.ndarray, contrast_codes: Sequence[int]) -> np.ndarray:
    return np.column_stack([(y == k).astype(float) for k in contrast_codes])


def _evaluate(theta: np.ndarray, X: np.ndarray, Y: np.ndarray) -> Tuple[float, np.ndarray, np.ndarray]:
    """Log-likelihood, score (K-1, P) and contrast probabilities (n, K-1)."""
    eta = X @ theta.T
    shift = np.maximum(eta.max(axis=1), 0.0)
    expo = np.exp(eta - shift[:, None])
    denom = np.exp(-shift) + expo.sum(axis=1)
    probs = expo / denom[:, None]
    ll = float((Y * eta).sum() - (shift + np.log(denom)).sum())
    grad = (Y - probs).T @ X
    return ll, grad, probs


def _information(X: np.ndarray, probs: np.ndarray) -> np.ndarray:
    """Observed (= expected) information for the stacked contrast coefficients."""
    k1, p = probs.shape[1], X.shape[1]
    info = np.zeros((k1 * p, k1 * p))
    for k in range(k1):
        for m in range(k1):
            w = probs[:, k] * ((1.0 if k == m else 0.0) - probs[:, m])
            info[k * p:(k + 1) * p, m * p:(m + 1) * p] = (X * w[:, None]).T @ X
    return info


def _standardizer(X: np.ndarray) -> np.ndarray:
    """M with X @ M centred and unit-scaled outside the intercept column."""
    p = X.shape[1]
    M = np.eye(p)
    for j in range(1, p):
        mean, sd = X[:, j].mean(), X[:, j].std()
        if sd > 0:
            M[j, j] = 1.0 / sd
            M[0, j] = -mean / sd
    return M


def _newton(X: np.ndarray, Y: np.ndarray, theta: np.ndarray) -> Tuple[np.ndarray, float, int, bool]:
    """Damped Newton ascent with step halving and a gradient-ascent fallback."""
    ll, grad, probs = _evaluate(theta, X, Y)
    converged = False
    iteration = 0
    for iteration in range(1, MAX_ITERATIONS + 1):
        if np.abs(grad).max() < SCORE_TOLERANCE:
            converged = True
            break
        info = _information(X, probs)
        try:
            step = np.linalg.solve(info, grad.ravel()).reshape(theta.shape)
        except np.linalg.LinAlgError:
            step = grad
        candidate = None
        t = 1.0
        for _ in range(MAX_HALVINGS + 1):
            trial = theta + t * step
            ll_trial, grad_trial, probs_trial = _evaluate(trial, X, Y)
            if ll_trial >= ll:
                candidate = (trial, ll_trial, grad_trial, probs_trial)
                break
            t /= 2.0
        if candidate is None:
            t = 1.0 / max(1.0, float(np.abs(np.diag(info)).max()))
            for _ in range(60):
                trial = theta + t * grad
                ll_trial, grad_trial, probs_trial = _evaluate(trial, X, Y)
                if ll_trial >= ll:
                    candidate = (trial, ll_trial, grad_trial, probs_trial)
                    break
                t /= 2.0
        if candidate is None:
            # no ascent direction left at floating-point resolution
            converged = bool(np.abs(grad).max() < 1e-6)
            break
        change = abs(candidate[1] - ll) / max(1.0, abs(ll))
        theta, ll, grad, probs = candidate
        if change < RELATIVE_LL_TOLERANCE:
            converged = True
            break

    # a few full Newton steps, kept only while the score shrinks
    for _ in range(3):
        info = _information(X, probs)
        try:
            trial = theta + np.linalg.solve(info, grad.ravel()).reshape(theta.shape)
        except np.linalg.LinAlgError:
            break
        ll_trial, grad_trial, probs_trial = _evaluate(trial, X, Y)
        if not np.abs(grad_trial).max() < np.abs(grad).max() or ll_trial < ll - 1e-9 * max(1.0, abs(ll)):
            break
        theta, ll, grad, probs = trial, ll_trial, grad_trial, probs_trial
    return theta, ll, iteration, converged


def _start(y: np.ndarray, ref: int, contrast_codes: Sequence[int], p: int) -> np.ndarray:
    theta = np.zeros((len(contrast_codes), p))
    n_ref = (y == ref).sum() + 0.5
    for row, k in enumerate(contrast_codes):
        theta[row, 0] = math.log(((y == k).sum() + 0.5) / n_ref)
    return theta


def null_log_likelihood(y: np.ndarray, n_levels: int) -> float:
    """sum_k n_k log(n_k / n), the intercept-only optimum."""
    counts = np.bincount(y, minlength=n_levels).astype(float)
    counts = counts[counts > 0]
    return float((counts * np.log(counts / counts.sum())).sum())


def fit_design(design: Design, spec: Optional[PredictorSpec] = None) -> MLRModel:
    """Fit the multinomial logit to an already built design."""
    X, y = design.X, design.y
    check_full_rank(X, design.term_names)
    ref = design.outcome_levels.index(design.reference_level)
    contrast_codes = [k for k in range(len(design.outcome_levels)) if k != ref]
    Y = _indicators(y, contrast_codes)

    M = _standardizer(X)
    X_std = X @ M
    theta_std = _start(y, ref, contrast_codes, X.shape[1])
    theta_std, ll, iterations, converged = _newton(X_std, Y, theta_std)

    _, _, probs = _evaluate(theta_std, X_std, Y)
    info = _information(X_std, probs)
    warnings: List[str] = []
    try:
        cov_std = np.linalg.inv(info)
    except np.linalg.LinAlgError:
        cov_std = np.linalg.pinv(info)
        warnings.append("information matrix is singular; covariance from the pseudo-inverse")
    T = np.kron(np.eye(len(contrast_codes)), M)
    cov = T @ cov_std @ T.T
    cov = (cov + cov.T) / 2.0
    theta = theta_std @ M.T

    if not converged:
        warnings.append(f"did not converge within {MAX_ITERATIONS} iterations")
    threshold = float(get_config().get("SEPARATION_THRESHOLD", 15.0))
    # raw-year intercepts are legitimately large; only slopes signal separation
    if theta.shape[1] > 1 and np.abs(theta[:, 1:]).max() > threshold:
        warnings.append(f"slope beyond ±{threshold:g}; possible separation")
    for message in warnings:
        logger.warning(f"Multinomial fit ({', '.join(design.term_names)}): {message}")

    return MLRModel(
        outcome_levels=design.outcome_levels,
        reference_level=design.reference_level,
        term_names=design.term_names,
        coefficients=theta.tolist(),
        covariance=cov.tolist(),
        log_likelihood=ll,
        null_log_likelihood=null_log_likelihood(y, len(design.outcome_levels)),
        n=len(y),
        spec=spec or PredictorSpec(year="Year" in design.term_names, venue=len(design.venue_levels) > 1),
        venue_levels=design.venue_levels,
        year_center=design.year_center,
        year_range=design.year_range,
        converged=converged,
        iterations=iterations,
        data_fingerprint=design.fingerprint,
        warnings=warnings,
    )


def fit_multinomial(records: Sequence[ObservationRow], spec: Optional[PredictorSpec] = None,
                    reference: Optional[str] = None) -> MLRModel:
    """
    Fit outcome ~ spec by maximum likelihood; ``reference`` defaults to Incomplete.

    Raises:
        RankDeficiencyError: naming the collinear design columns
        UnknownLevelError: reference outcome or venue level not in the data
    """
    spec = spec or PredictorSpec()
    return fit_design(build_design(records, spec, reference), spec)


def fit_model_family(records: Sequence[ObservationRow], spec: Optional[PredictorSpec] = None,
                     reference: Optional[str] = None, workers: int = 1) -> Dict[str, MLRModel]:
    """Null model plus every sub-model of ``spec``: year-only, venue-only, year+venue."""
    spec = spec or PredictorSpec()
    specs = {"null": spec.without(year=False, venue=False)}
    if spec.year:
        specs["year"] = spec.without(venue=False)
    if spec.venue:
        specs["venue"] = spec.without(year=False)
    if spec.year and spec.venue:
        specs["year+venue"] = spec
    with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
        fitted = list(executor.map(lambda s: fit_multinomial(records, s, reference), specs.values()))
    return dict(zip(specs.keys(), fitted))


def _model_design(model: MLRModel, rows: Sequence[ObservationRow]) -> Tuple[np.ndarray, np.ndarray]:
    design = build_design(rows, model.spec, model.reference_level, model.outcome_levels)
    ref = model.outcome_levels.index(model.reference_level)
    contrast_codes = [k for k in range(len(model.outcome_levels)) if k != ref]
    return design.X, _indicators(design.y, contrast_codes)


def log_likelihood(model: MLRModel, rows: Sequence[ObservationRow]) -> float:
    X, Y = _model_design(model, rows)
    return _evaluate(model.beta, X, Y)[0]


def score(model: MLRModel, rows: Sequence[ObservationRow]) -> np.ndarray:
    """Gradient of the log-likelihood at the model's coefficients, stacked by contrast."""
    X, Y = _model_design(model, rows)
    return _evaluate(model.beta, X, Y)[1].ravel()


def information_matrix(model: MLRModel, rows: Sequence[ObservationRow]) -> np.ndarray:
    """Negative Hessian of the log-likelihood at the model's coefficients."""
    X, Y = _model_design(model, rows)
    return _information(X, _evaluate(model.beta, X, Y)[2])


def lr_test(full: MLRModel, nested: MLRModel) -> FitComparison:
    """
    Likelihood-ratio test of ``nested`` against ``full`` with McFadden's R²
    of the full model.

    Raises:
        NotNestedError: different records or outcome coding, or terms not a subset
    """
    require(full.data_fingerprint == nested.data_fingerprint, NotNestedError,
            "Models were fitted to different records")
    require(full.outcome_levels == nested.outcome_levels and full.reference_level == nested.reference_level,
            NotNestedError, "Models use different outcome coding")
    require(set(nested.term_names) <= set(full.term_names), NotNestedError,
            f"Terms {sorted(set(nested.term_names) - set(full.term_names))} are missing from the full model")
    df = full.n_parameters - nested.n_parameters
    chi_sq = max(0.0, 2.0 * (full.log_likelihood - nested.log_likelihood))
    p = chi_square_upper_tail(chi_sq, df) if df > 0 else 1.0
    r2 = 0.0
    if full.null_log_likelihood < 0:
        r2 = min(max(0.0, 1.0 - full.log_likelihood / full.null_log_likelihood), 1.0 - 1e-15)
    return FitComparison(chi_sq=chi_sq, df=df, p=p, mcfadden_r2=r2,
                         full_terms=list(full.term_names), nested_terms=list(nested.term_names))


def coefficient_row(term: str, b: float, se: float, confidence: float = 0.95) -> CoefficientRow:
    z = b / se
    crit = float(norm.ppf(0.5 + confidence / 2.0))
    return CoefficientRow(term=term, b=b, se=se, z=z, p=normal_two_tailed(z), odds_ratio=math.exp(b),
                          or_ci_lo=math.exp(b - crit * se), or_ci_hi=math.exp(b + crit * se))


def coefficient_table(model: MLRModel, outcome_level: str, confidence: float = 0.95) -> List[CoefficientRow]:
    """
    b, SE, z, p and odds ratio with interval for every term of one contrast.

    Raises:
        UnknownLevelError: the level is the reference or not an outcome
    """
    if outcome_level not in model.contrast_levels:
        raise UnknownLevelError(f"{outcome_level!r} is not a non-reference outcome level of this model")
    k = model.contrast_levels.index(outcome_level)
    p = len(model.term_names)
    beta, cov = model.beta, model.cov
    return [coefficient_row(term, float(beta[k, j]), math.sqrt(cov[k * p + j, k * p + j]), confidence)
            for j, term in enumerate(model.term_names)]
