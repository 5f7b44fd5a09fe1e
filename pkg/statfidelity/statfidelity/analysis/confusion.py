from fractions import Fraction
from typing import Optional

from scipy.stats import beta, binomtest

from statfidelity_common.exceptions import DomainError, require
from statfidelity_common.models.corpus import ConfusionMetrics


def _ratio(num: int, den: int) -> Optional[Fraction]:
    return Fraction(num, den) if den else None


def _as_float(value: Optional[Fraction]) -> Optional[float]:
    return None if value is None else float(value)


def clopper_pearson(successes: int, trials: int, confidence: float = 0.95):
    """Exact binomial confidence interval."""
    alpha = 1.0 - confidence
    lo = 0.0 if successes == 0 else float(beta.ppf(alpha / 2.0, successes, trials - successes + 1))
    hi = 1.0 if successes == trials else float(beta.ppf(1.0 - alpha / 2.0, successes + 1, trials - successes))
    return lo, hi


def confusion_metrics(tp: int, fp: int, fn: int, tn: int, confidence: float = 0.95) -> ConfusionMetrics:
    """
    Accuracy (with Clopper-Pearson interval and a one-sided binomial test
    against the no-information rate), sensitivity, specificity, PPV, NPV
    and F1. Ratios are exact fractions until the final conversion; an
    undefined ratio (zero denominator) is None.

    Raises:
        DomainError: negative counts or an empty matrix
    """
    require(min(tp, fp, fn, tn) >= 0, DomainError, "confusion counts must be non-negative")
    total = tp + fp + fn + tn
    require(total > 0, DomainError, "confusion matrix is empty")

    correct = tp + tn
    accuracy = Fraction(correct, total)
    sensitivity = _ratio(tp, tp + fn)
    specificity = _ratio(tn, tn + fp)
    ppv = _ratio(tp, tp + fp)
    npv = _ratio(tn, tn + fn)
    f1 = None
    if ppv is not None and sensitivity is not None and ppv + sensitivity > 0:
        f1 = 2 * ppv * sensitivity / (ppv + sensitivity)
    nir = Fraction(max(tp + fn, fp + tn), total)

    lo, hi = clopper_pearson(correct, total, confidence)
    p_gt_nir = binomtest(correct, total, float(nir), alternative="greater").pvalue

    return ConfusionMetrics(
        tp=tp, fp=fp, fn=fn, tn=tn,
        accuracy=float(accuracy), acc_ci_lo=lo, acc_ci_hi=hi,
        nir=float(nir), p_acc_gt_nir=min(1.0, float(p_gt_nir)),
        sensitivity=_as_float(sensitivity), specificity=_as_float(specificity),
        ppv=_as_float(ppv), npv=_as_float(npv), f1=_as_float(f1),
    )
