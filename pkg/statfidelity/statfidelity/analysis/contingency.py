"""Cross-tabulation of paper and test records."""
from typing import Any, Callable, Dict, List, Optional, Sequence, Union

import pandas as pd

from statfidelity_common.exceptions import DegenerateTableError, EmptyInputError, require
from statfidelity_common.models.corpus import ContingencyTable, PaperRecord, TestRecord
from statfidelity_common.models.outcomes import OUTCOME_ORDER

Record = Union[PaperRecord, TestRecord]
Selector = Union[str, Callable[[Any], Any]]


def _outcome_of(record: Record) -> str:
    outcome = record.outcome
    # PaperRecord wraps the outcome in a PaperOutcome
    outcome = getattr(outcome, "outcome", outcome)
    return outcome.value


DIMENSIONS: Dict[str, Callable[[Record], Any]] = {
    "outcome": _outcome_of,
    "venue": lambda r: r.venue,
    "year": lambda r: r.year,
    "mcc_used": lambda r: r.mcc_used,
    "effect_sizes_reported": lambda r: r.effect_sizes_reported.value,
}


def _selector(dim: Selector) -> Callable[[Record], Any]:
    if callable(dim):
        return dim
    if dim in DIMENSIONS:
        return DIMENSIONS[dim]
    return lambda r: getattr(r, dim)


def _default_levels(dim: Selector, values: Sequence[Any]) -> List[Any]:
    observed = set(values)
    if dim == "outcome":
        return [o for o in OUTCOME_ORDER if o in observed]
    return sorted(observed, key=lambda v: (str(type(v)), v))


def build_contingency(records: Sequence[Record], row_dim: Selector, col_dim: Selector,
                      row_levels: Optional[Sequence[Any]] = None,
                      col_levels: Optional[Sequence[Any]] = None) -> ContingencyTable:
    """
    Count records by two dimensions.

    Dimensions are names from DIMENSIONS, attribute names or callables.
    Levels default to the observed ones (canonical order for outcomes,
    sorted otherwise); explicit levels keep unobserved rows as zeros.

    Raises:
        EmptyInputError: no records
        DegenerateTableError: fewer than two levels on either side
    """
    require(len(records) > 0, EmptyInputError, "Cannot build a contingency table from no records")
    row_get, col_get = _selector(row_dim), _selector(col_dim)
    df = pd.DataFrame({"row": [row_get(r) for r in records], "col": [col_get(r) for r in records]})

    rows = list(row_levels) if row_levels is not None else _default_levels(row_dim, df["row"].tolist())
    cols = list(col_levels) if col_levels is not None else _default_levels(col_dim, df["col"].tolist())
    require(len(rows) >= 2 and len(cols) >= 2, DegenerateTableError,
            f"Table needs at least two levels per dimension, got {len(rows)}x{len(cols)}")

    counts = pd.crosstab(df["row"], df["col"]).reindex(index=rows, columns=cols, fill_value=0)
    return ContingencyTable(row_labels=[str(r) for r in rows], col_labels=[str(c) for c in cols],
                            counts=counts.astype(int).values.tolist())
