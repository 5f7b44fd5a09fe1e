"""Predicted outcome probabilities and their delta-method bands."""
from typing import Dict, List, Mapping, Sequence, Union

import numpy as np
from scipy.special import expit
from scipy.stats import norm

from statfidelity_common.exceptions import DomainError, UnknownLevelError, require
from statfidelity_common.logger_config import logger
from statfidelity_common.models.regression import EffectCurve, EffectPoint, MLRModel
from statfidelity.regression.design import YEAR, collapse_venue

Setting = Mapping[str, Union[float, str]]


def design_row(model: MLRModel, setting: Setting) -> np.ndarray:
    """Model-matrix row for one predictor setting ('year', 'venue')."""
    x = [1.0]
    if YEAR in model.term_names:
        default_year = model.year_center if model.spec.center_year else float(np.mean(model.year_range))
        x.append(float(setting.get("year", default_year)) - model.year_center)
    if len(model.venue_levels) > 1:
        venue = collapse_venue(str(setting.get("venue", model.venue_levels[0])), model.spec.collapse_venues)
        if venue not in model.venue_levels:
            raise UnknownLevelError(f"Venue {venue!r} not among {model.venue_levels}")
        x.extend(1.0 if venue == level else 0.0 for level in model.venue_levels[1:])
    return np.asarray(x)


def _probabilities(model: MLRModel, X: np.ndarray) -> np.ndarray:
    """Softmax over all outcome levels, columns in ``model.outcome_levels`` order."""
    eta_contrast = X @ model.beta.T
    ref = model.outcome_levels.index(model.reference_level)
    eta = np.insert(eta_contrast, ref, 0.0, axis=1)
    eta -= eta.max(axis=1, keepdims=True)
    expo = np.exp(eta)
    return expo / expo.sum(axis=1, keepdims=True)


def predict_proba(model: MLRModel, settings: Sequence[Setting]) -> np.ndarray:
    """(len(settings), K) matrix of predicted probabilities."""
    if not settings:
        return np.zeros((0, len(model.outcome_levels)))
    return _probabilities(model, np.vstack([design_row(model, s) for s in settings]))


def _warn_extrapolation(model: MLRModel, grid: Sequence[Setting]) -> None:
    if YEAR not in model.term_names or not model.year_range:
        return
    lo, hi = model.year_range
    outside = sorted({float(s["year"]) for s in grid if "year" in s and not lo <= float(s["year"]) <= hi})
    if outside:
        logger.warning(f"Effect display extrapolates beyond observed years {lo:g}-{hi:g}: {outside}")


def effect_display(model: MLRModel, grid: Sequence[Setting], confidence: float = 0.95) -> List[EffectCurve]:
    """
    Probability of every outcome level over ``grid`` with confidence bands.

    Bands come from the delta method on the logit of each category
    probability, transformed back to the probability scale.
    """
    require(0.0 < confidence < 1.0, DomainError, f"confidence must lie in (0, 1), got {confidence}")
    _warn_extrapolation(model, grid)
    crit = float(norm.ppf(0.5 + confidence / 2.0))
    cov = model.cov
    contrasts = model.contrast_levels
    points: Dict[str, List[EffectPoint]] = {level: [] for level in model.outcome_levels}

    for setting in grid:
        x = design_row(model, setting)
        probs = _probabilities(model, x[None, :])[0]
        by_level = dict(zip(model.outcome_levels, probs))
        p_contrast = np.array([by_level[c] for c in contrasts])
        for level in model.outcome_levels:
            p_k = by_level[level]
            delta = np.array([1.0 if c == level else 0.0 for c in contrasts])
            # d logit(p_k) / d beta_m = (delta_km - p_m) / (1 - p_k) * x
            gradient = np.kron((delta - p_contrast) / max(1.0 - p_k, 1e-300), x)
            se = float(np.sqrt(max(gradient @ cov @ gradient, 0.0)))
            logit = float(np.log(p_k) - np.log1p(-p_k)) if 0.0 < p_k < 1.0 else float("nan")
            if np.isfinite(logit):
                lower, upper = float(expit(logit - crit * se)), float(expit(logit + crit * se))
            else:
                lower = upper = float(p_k)
            points[level].append(EffectPoint(setting=dict(setting), probability=float(p_k),
                                             lower=min(lower, float(p_k)), upper=max(upper, float(p_k))))
    return [EffectCurve(level=level, confidence=confidence, points=points[level]) for level in model.outcome_levels]
