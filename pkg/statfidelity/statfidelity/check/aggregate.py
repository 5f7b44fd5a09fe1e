from typing import Optional, Sequence

from statfidelity_common.exceptions import UndefinedPaperError, require
from statfidelity_common.models.outcomes import EvaluatedTest, Outcome, PaperOutcome
from statfidelity_common.models.reports import IncompletePValue


def _classify(n_complete: int, n_incomplete: int, n_inconsistent: int, n_decision_errors: int) -> Outcome:
    # DecisionError > Inconsistency > CorrectNHST; Incomplete only without complete tests
    if n_complete == 0:
        return Outcome.INCOMPLETE
    if n_decision_errors:
        return Outcome.DECISION_ERROR
    if n_inconsistent:
        return Outcome.INCONSISTENCY
    return Outcome.CORRECT_NHST


def aggregate_paper(paper_id: str, tests: Sequence[EvaluatedTest],
                    incompletes: Sequence[IncompletePValue]) -> PaperOutcome:
    """
    Fold per-test outcomes into the outcome of the paper.

    Raises:
        UndefinedPaperError: when the paper has neither tests nor p-values
    """
    require(bool(tests) or bool(incompletes), UndefinedPaperError,
            f"Paper {paper_id!r} reports no p-values")
    n_inconsistent = sum(1 for t in tests if t.outcome == Outcome.INCONSISTENCY)
    n_decision_errors = sum(1 for t in tests if t.outcome == Outcome.DECISION_ERROR)
    return PaperOutcome(
        paper_id=paper_id,
        outcome=_classify(len(tests), len(incompletes), n_inconsistent, n_decision_errors),
        n_complete=len(tests),
        n_incomplete=len(incompletes),
        n_inconsistent=n_inconsistent,
        n_decision_errors=n_decision_errors,
    )


def merge_outcomes(a: PaperOutcome, b: PaperOutcome, paper_id: Optional[str] = None) -> PaperOutcome:
    """Combine the outcomes of two disjoint parts of the same paper."""
    counts = dict(
        n_complete=a.n_complete + b.n_complete,
        n_incomplete=a.n_incomplete + b.n_incomplete,
        n_inconsistent=a.n_inconsistent + b.n_inconsistent,
        n_decision_errors=a.n_decision_errors + b.n_decision_errors,
    )
    return PaperOutcome(paper_id=paper_id or a.paper_id, outcome=_classify(**counts), **counts)
