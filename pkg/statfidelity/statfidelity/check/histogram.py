import math
from collections import Counter
from typing import List, Sequence

from statfidelity_common.exceptions import DomainError, require
from statfidelity_common.models.corpus import HistogramBin, PDifferenceSummary
from statfidelity_common.models.outcomes import EvaluatedTest
from statfidelity_common.models.reports import Relation


def _differences(tests: Sequence[EvaluatedTest]) -> List[float]:
    return [t.p_difference for t in tests
            if t.raw.p_operator == Relation.EQ and t.p_difference is not None]


def p_difference_histogram(tests: Sequence[EvaluatedTest], bin_width: float) -> List[HistogramBin]:
    """
    Histogram of reported minus recomputed p for exact (=) reports.

    Bins are centred on multiples of ``bin_width`` and tile the observed
    range, empty bins included.
    """
    require(bin_width > 0, DomainError, f"bin_width must be positive, got {bin_width}")
    diffs = _differences(tests)
    if not diffs:
        return []
    # half-up assignment, so a difference on a bin edge goes to the upper bin
    keys = Counter(int(math.floor(d / bin_width + 0.5)) for d in diffs)
    return [HistogramBin(bin_center=round(k * bin_width, 12), count=keys.get(k, 0))
            for k in range(min(keys), max(keys) + 1)]


def p_difference_summary(tests: Sequence[EvaluatedTest]) -> PDifferenceSummary:
    """Signs of reported minus recomputed p; positive means reported less significant."""
    diffs = _differences(tests)
    return PDifferenceSummary(
        positive=sum(1 for d in diffs if d > 0),
        negative=sum(1 for d in diffs if d < 0),
        zero=sum(1 for d in diffs if d == 0),
    )
