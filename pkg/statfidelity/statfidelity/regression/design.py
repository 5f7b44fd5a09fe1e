"""Design matrices for the multinomial outcome models."""
import hashlib
import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from statfidelity_common.exceptions import DomainError, EmptyInputError, RankDeficiencyError, UnknownLevelError, require
from statfidelity_common.models.outcomes import OUTCOME_ORDER, Outcome
from statfidelity_common.models.regression import ObservationRow, PredictorSpec

INTERCEPT = "(Intercept)"
YEAR = "Year"
VENUE_PREFIX = "Venue"
PREFERRED_VENUE_REFERENCE = "SOUPS"


@dataclass
class Design:
    X: np.ndarray
    y: np.ndarray
    term_names: List[str]
    outcome_levels: List[str]
    reference_level: str
    venue_levels: List[str] = field(default_factory=list)
    year_center: float = 0.0
    year_range: List[float] = field(default_factory=list)
    fingerprint: str = ""

    @property
    def contrast_levels(self) -> List[str]:
        return [lvl for lvl in self.outcome_levels if lvl != self.reference_level]


def collapse_venue(venue: str, mapping: Optional[Dict[str, str]]) -> str:
    """Relabel a venue; the '*' key catches every unlisted venue."""
    if not mapping:
        return venue
    if venue in mapping:
        return mapping[venue]
    return mapping.get("*", venue)


def venue_reference(levels: Sequence[str], requested: Optional[str]) -> str:
    if requested is not None:
        if requested not in levels:
            raise UnknownLevelError(f"Venue reference {requested!r} not among {list(levels)}")
        return requested
    return PREFERRED_VENUE_REFERENCE if PREFERRED_VENUE_REFERENCE in levels else sorted(levels)[0]


def _outcome_levels(outcomes: Sequence[str]) -> List[str]:
    observed = set(outcomes)
    known = [o for o in OUTCOME_ORDER if o in observed]
    return known + sorted(observed - set(known))


def fingerprint(rows: Sequence[ObservationRow]) -> str:
    """Order-sensitive digest identifying the records behind a fit."""
    payload = json.dumps([[r.outcome, r.venue, r.year] for r in rows], separators=(",", ":"))
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def collinear_columns(X: np.ndarray, names: Sequence[str], tol: Optional[float] = None) -> List[str]:
    """Columns that add nothing to the rank of the columns before them."""
    dropped, kept = [], []
    for j in range(X.shape[1]):
        candidate = kept + [j]
        if np.linalg.matrix_rank(X[:, candidate], tol=tol) < len(candidate):
            dropped.append(names[j])
        else:
            kept.append(j)
    return dropped


def check_full_rank(X: np.ndarray, names: Sequence[str]) -> None:
    """
    Raises:
        RankDeficiencyError: naming the columns that are linear combinations of earlier ones
    """
    if np.linalg.matrix_rank(X) < X.shape[1]:
        raise RankDeficiencyError(collinear_columns(X, names))


def build_design(rows: Sequence[ObservationRow], spec: Optional[PredictorSpec] = None,
                 reference: Optional[str] = None, outcome_levels: Optional[Sequence[str]] = None) -> Design:
    """
    Intercept, optional Year and dummy-coded venue columns for ``rows``.

    Raises:
        EmptyInputError: no rows
        DomainError: fewer than two outcome levels
        UnknownLevelError: reference outcome or venue level absent
        RankDeficiencyError: collinear columns
    """
    require(len(rows) > 0, EmptyInputError, "No observations to fit")
    spec = spec or PredictorSpec()
    levels = list(outcome_levels) if outcome_levels is not None else _outcome_levels([r.outcome for r in rows])
    require(len(levels) >= 2, DomainError, f"Need at least two outcome levels, got {levels}")
    unknown = {r.outcome for r in rows} - set(levels)
    if unknown:
        raise UnknownLevelError(f"Outcomes {sorted(unknown)} not among levels {levels}")
    if reference is None:
        reference = Outcome.INCOMPLETE.value if Outcome.INCOMPLETE.value in levels else levels[0]
    if reference not in levels:
        raise UnknownLevelError(f"Reference level {reference!r} not among {levels}")

    n = len(rows)
    columns, names = [np.ones(n)], [INTERCEPT]
    years = np.array([r.year for r in rows], dtype=float)
    year_center = 0.0
    if spec.year:
        year_center = float(years.mean()) if spec.center_year else 0.0
        columns.append(years - year_center)
        names.append(YEAR)

    venue_levels: List[str] = []
    if spec.venue:
        venues = [collapse_venue(r.venue, spec.collapse_venues) for r in rows]
        venue_levels = sorted(set(venues))
        ref_venue = venue_reference(venue_levels, spec.venue_reference)
        venue_levels = [ref_venue] + [v for v in venue_levels if v != ref_venue]
        for level in venue_levels[1:]:
            columns.append(np.array([1.0 if v == level else 0.0 for v in venues]))
            names.append(f"{VENUE_PREFIX}{level}")

    X = np.column_stack(columns)
    check_full_rank(X, names)
    index = {lvl: k for k, lvl in enumerate(levels)}
    return Design(
        X=X,
        y=np.array([index[r.outcome] for r in rows], dtype=np.int64),
        term_names=names,
        outcome_levels=levels,
        reference_level=reference,
        venue_levels=venue_levels,
        year_center=year_center,
        year_range=[float(years.min()), float(years.max())],
        fingerprint=fingerprint(rows),
    )
