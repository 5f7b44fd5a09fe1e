from statfidelity.check.rounding import rounding_interval
from statfidelity.check.consistency import evaluate_test
from statfidelity.check.aggregate import aggregate_paper, merge_outcomes
from statfidelity.check.histogram import p_difference_histogram, p_difference_summary
from statfidelity.check.document import evaluate_document

__all__ = [
    "rounding_interval",
    "evaluate_test",
    "aggregate_paper",
    "merge_outcomes",
    "p_difference_histogram",
    "p_difference_summary",
    "evaluate_document",
]
