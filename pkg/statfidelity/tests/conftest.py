"""Shared fixtures: outcome tables of a published sample and records rebuilt from them."""
from typing import Dict, List, Sequence

import numpy as np
import pytest

from statfidelity_common.config import reset_config
from statfidelity_common.models.corpus import ContingencyTable, PaperRecord, TestRecord
from statfidelity_common.models.outcomes import CheckConfig, Outcome, PaperOutcome
from statfidelity_common.models.regression import ObservationRow
from statfidelity.check.consistency import evaluate_test
from statfidelity.extract.scanner import scan_document

OUTCOMES = ["CorrectNHST", "Inconsistency", "DecisionError", "Incomplete"]
VENUES = ["SOUPS", "USEC", "CCS", "USENIX", "PETS", "TISSEC", "LASER", "S&P", "TDSC", "WEIS"]
YEARS = list(range(2006, 2017))

# papers: outcome x year
PAPER_BY_YEAR = [
    [2, 1, 1, 2, 2, 4, 5, 1, 5, 3, 1],
    [2, 0, 0, 1, 1, 0, 0, 0, 3, 3, 2],
    [0, 1, 0, 1, 1, 0, 1, 1, 0, 0, 1],
    [3, 2, 3, 3, 4, 2, 11, 7, 16, 7, 11],
]
# papers: outcome x venue
PAPER_BY_VENUE = [
    [19, 0, 1, 2, 3, 1, 0, 0, 1, 0],
    [10, 1, 1, 0, 0, 0, 0, 0, 0, 0],
    [5, 0, 0, 0, 0, 0, 1, 0, 0, 0],
    [43, 3, 6, 5, 3, 2, 1, 2, 3, 1],
]
# tests: outcome x year
TEST_BY_YEAR = [
    [13, 24, 14, 18, 26, 13, 22, 9, 37, 28, 14],
    [2, 1, 0, 1, 2, 0, 2, 4, 4, 3, 5],
    [0, 5, 0, 1, 1, 0, 1, 1, 0, 0, 1],
    [53, 57, 28, 105, 96, 59, 347, 123, 270, 170, 215],
]
# tests: outcome x venue
TEST_BY_VENUE = [
    [170, 1, 9, 4, 11, 6, 5, 0, 12, 0],
    [19, 1, 3, 0, 0, 0, 1, 0, 0, 0],
    [9, 0, 0, 0, 0, 0, 1, 0, 0, 0],
    [1028, 33, 122, 100, 72, 71, 19, 11, 60, 7],
]

JMP_COMPARISON = [[27, 12, 6, 69], [58, 25, 16, 0]]
JMP_RESTRICTED = [[27, 12, 6], [58, 25, 16]]


def _joint(by_venue: Sequence[Sequence[int]], by_year: Sequence[Sequence[int]], seed: int):
    """(outcome, venue, year) triples matching both outcome margins tables."""
    rng = np.random.default_rng(seed)
    triples = []
    for outcome, venue_counts, year_counts in zip(OUTCOMES, by_venue, by_year):
        venues = [v for v, c in zip(VENUES, venue_counts) for _ in range(c)]
        years = [y for y, c in zip(YEARS, year_counts) for _ in range(c)]
        assert len(venues) == len(years)
        years = list(rng.permutation(years))
        triples.extend((outcome, v, int(y)) for v, y in zip(venues, years))
    return triples


def paper_outcome(paper_id: str, outcome: str) -> PaperOutcome:
    if outcome == "Incomplete":
        return PaperOutcome(paper_id=paper_id, outcome=Outcome.INCOMPLETE, n_incomplete=1)
    return PaperOutcome(paper_id=paper_id, outcome=Outcome(outcome), n_complete=1,
                        n_inconsistent=int(outcome == "Inconsistency"),
                        n_decision_errors=int(outcome == "DecisionError"))


@pytest.fixture(autouse=True)
def _fresh_config():
    reset_config()
    yield
    reset_config()


@pytest.fixture(scope="session")
def paper_records() -> List[PaperRecord]:
    return [PaperRecord(paper_id=f"P{i:03d}", venue=venue, year=year, outcome=paper_outcome(f"P{i:03d}", outcome))
            for i, (outcome, venue, year) in enumerate(_joint(PAPER_BY_VENUE, PAPER_BY_YEAR, seed=3))]


@pytest.fixture(scope="session")
def test_level_records() -> List[TestRecord]:
    return [TestRecord(paper_id=f"T{i:04d}", index=0, venue=venue, year=year, outcome=Outcome(outcome),
                       complete=outcome != "Incomplete")
            for i, (outcome, venue, year) in enumerate(_joint(TEST_BY_VENUE, TEST_BY_YEAR, seed=5))]


@pytest.fixture(scope="session")
def test_level_observations(test_level_records) -> List[ObservationRow]:
    return [ObservationRow(outcome=r.outcome.value, venue=r.venue, year=r.year) for r in test_level_records]


def table(counts, rows=None, cols=None) -> ContingencyTable:
    rows = rows or [f"r{i}" for i in range(len(counts))]
    cols = cols or [f"c{j}" for j in range(len(counts[0]))]
    return ContingencyTable(row_labels=rows, col_labels=cols, counts=counts)


@pytest.fixture
def small_cfg() -> CheckConfig:
    return CheckConfig(replicates=20000, bootstrap_replicates=2000, seed=42)


def evaluate(text: str, cfg: CheckConfig = None):
    reports, _ = scan_document(text)
    assert len(reports) == 1, f"expected one report in {text!r}, got {len(reports)}"
    return evaluate_test(reports[0], cfg or CheckConfig())


@pytest.fixture(scope="session")
def evaluated() -> Dict[Outcome, object]:
    return {
        Outcome.CORRECT_NHST: evaluate("t(24) = 2.52, p = .019"),
        Outcome.INCONSISTENCY: evaluate("t(24) = 2.52, p = .03"),
        Outcome.DECISION_ERROR: evaluate("t(24) = 1.00, p < .05"),
    }
