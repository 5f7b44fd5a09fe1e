"""Classification of p-values that come without a test statistic."""
import math
from collections import Counter
from typing import Iterable, List, Optional, Sequence

from statfidelity_common.exceptions import DomainError, require
from statfidelity_common.models.reports import IncompleteClass, IncompleteComposition, IncompletePValue, Relation


def _check_alpha(alpha: float) -> None:
    require(0.0 < alpha < 1.0, DomainError, f"alpha must lie in (0, 1), got {alpha}")


def classify_incomplete(ip: IncompletePValue, alpha: float) -> IncompleteClass:
    """
    Sort a bare p-value into its reporting class at significance level alpha.

    An upper bound above alpha ("p < .10") is grouped with the lower bounds
    as BoundAboveAlpha: neither supports a claim of significance at alpha.
    """
    _check_alpha(alpha)
    op = ip.p_operator
    if op == Relation.DECLARED_NS:
        return IncompleteClass.NON_SIG_DECLARED
    if op == Relation.DECLARED_SIG:
        return IncompleteClass.SIG_AT_ALPHA
    if op == Relation.EQ:
        return IncompleteClass.EXACT_P if ip.p_value > 0 else IncompleteClass.IMPOSSIBLE_ZERO
    if op in (Relation.GT, Relation.GEQ):
        return IncompleteClass.BOUND_ABOVE_ALPHA
    if math.isclose(ip.p_value, alpha, rel_tol=0.0, abs_tol=1e-12):
        return IncompleteClass.SIG_AT_ALPHA
    if ip.p_value < alpha:
        return IncompleteClass.SIG_BELOW_ALPHA
    return IncompleteClass.BOUND_ABOVE_ALPHA


def incomplete_composition(classes: Sequence[IncompleteClass], exact_p_values: Iterable[float],
                           alpha: float) -> IncompleteComposition:
    """Counts and shares per class; ``exact_significant`` counts exact p below alpha."""
    _check_alpha(alpha)
    counts = Counter(classes)
    total = len(classes)
    return IncompleteComposition(
        total=total,
        counts={c: counts.get(c, 0) for c in IncompleteClass},
        proportions={c: (counts.get(c, 0) / total if total else 0.0) for c in IncompleteClass},
        exact_significant=sum(1 for p in exact_p_values if p < alpha),
    )


def compose_incompletes(incompletes: Sequence[IncompletePValue], alpha: float,
                        classes: Optional[List[IncompleteClass]] = None) -> IncompleteComposition:
    """Classify (unless ``classes`` is given) and summarise a list of bare p-values."""
    if classes is None:
        classes = [classify_incomplete(ip, alpha) for ip in incompletes]
    exact = [ip.p_value for ip, c in zip(incompletes, classes) if c == IncompleteClass.EXACT_P]
    return incomplete_composition(classes, exact, alpha)
