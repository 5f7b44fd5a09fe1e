from statfidelity.analysis.contingency import build_contingency
from statfidelity.analysis.association import (associate, chisq_independence, cramers_v, cramers_v_ci,
                                               exact_fisher_2x2, fisher_exact_mc)
from statfidelity.analysis.confusion import confusion_metrics
from statfidelity.analysis.series import proportions_by_year

__all__ = [
    "build_contingency",
    "associate",
    "chisq_independence",
    "cramers_v",
    "cramers_v_ci",
    "exact_fisher_2x2",
    "fisher_exact_mc",
    "confusion_metrics",
    "proportions_by_year",
]
