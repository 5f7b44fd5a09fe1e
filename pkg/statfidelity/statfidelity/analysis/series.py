from typing import Callable, List, Sequence

import pandas as pd

from statfidelity_common.exceptions import EmptyInputError, require
from statfidelity_common.models.chart_data import ChartData, SeriesItem
from statfidelity_common.models.corpus import EffectSizeReporting, PaperRecord
from statfidelity_common.models.outcomes import OUTCOME_ORDER


def _share_by_year(records: Sequence[PaperRecord], title: str, key: Callable[[PaperRecord], str],
                   categories: List[str]) -> ChartData:
    df = pd.DataFrame({"year": [r.year for r in records], "category": [key(r) for r in records]})
    shares = pd.crosstab(df["year"], df["category"], normalize="index")
    shares = shares.reindex(columns=categories, fill_value=0.0).sort_index()
    return ChartData(
        title=title,
        x=[SeriesItem(name="year", data=[int(y) for y in shares.index])],
        y=[SeriesItem(name=c, data=[round(float(v), 12) for v in shares[c]]) for c in categories],
    )


def proportions_by_year(records: Sequence[PaperRecord]) -> List[ChartData]:
    """Yearly shares of paper outcomes, multiple-comparison correction and effect-size reporting."""
    require(len(records) > 0, EmptyInputError, "No papers to summarise by year")
    return [
        _share_by_year(records, "outcomes", lambda r: r.outcome.outcome.value, OUTCOME_ORDER),
        _share_by_year(records, "mcc_used", lambda r: "MCC" if r.mcc_used else "no MCC", ["MCC", "no MCC"]),
        _share_by_year(records, "effect_sizes", lambda r: r.effect_sizes_reported.value,
                       [e.value for e in EffectSizeReporting]),
    ]
