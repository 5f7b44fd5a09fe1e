# -*- coding: utf-8 -*-
from enum import Enum
from typing import ClassVar, List, Optional

import numpy as np
from pydantic import BaseModel, Field, model_validator

from statfidelity_common.models.outcomes import Outcome, PaperOutcome, SignificanceClaim
from statfidelity_common.models.statistic import Probability


class EffectSizeReporting(str, Enum):
    NONE = "none"
    INFERABLE = "inferable"
    EXPLICIT = "explicit"


class PaperRecord(BaseModel):
    """A paper's metadata joined with its aggregated outcome."""
    paper_id: str
    venue: str = Field(..., min_length=1)
    year: int
    mcc_used: bool = False
    effect_sizes_reported: EffectSizeReporting = EffectSizeReporting.NONE
    outcome: PaperOutcome


class TestRecord(BaseModel):
    """
    One row per test: complete reports carry their evaluation details,
    incomplete p-values are rows with outcome Incomplete.
    """
    __test__: ClassVar[bool] = False

    paper_id: str
    index: int = Field(..., ge=0)
    venue: str
    year: int
    outcome: Outcome
    complete: bool = True
    text: str = ""
    reported_claim: SignificanceClaim = SignificanceClaim.NO_CLAIM
    recomputed_claim: SignificanceClaim = SignificanceClaim.NO_CLAIM
    recomputed_p_lo: Optional[Probability] = None
    recomputed_p_hi: Optional[Probability] = None
    p_difference: Optional[float] = None
    one_tailed_applied: bool = False


class ContingencyTable(BaseModel):
    row_labels: List[str]
    col_labels: List[str]
    counts: List[List[int]]

    @model_validator(mode="after")
    def check_shape(self) -> "ContingencyTable":
        if len(self.row_labels) < 2 or len(self.col_labels) < 2:
            raise ValueError("a contingency table needs at least 2 rows and 2 columns")
        if len(self.counts) != len(self.row_labels):
            raise ValueError("row count does not match row_labels")
        for row in self.counts:
            if len(row) != len(self.col_labels):
                raise ValueError("column count does not match col_labels")
            if any(c < 0 for c in row):
                raise ValueError("counts must be non-negative")
        return self

    def as_array(self) -> np.ndarray:
        return np.asarray(self.counts, dtype=np.int64)

    @property
    def total(self) -> int:
        return int(sum(sum(row) for row in self.counts))

    def transpose(self) -> "ContingencyTable":
        return ContingencyTable(row_labels=list(self.col_labels), col_labels=list(self.row_labels),
                                counts=self.as_array().T.tolist())

    def drop_empty(self) -> "ContingencyTable":
        """Remove rows and columns whose margin is zero."""
        arr = self.as_array()
        rows = [i for i in range(arr.shape[0]) if arr[i].sum() > 0]
        cols = [j for j in range(arr.shape[1]) if arr[:, j].sum() > 0]
        return ContingencyTable(row_labels=[self.row_labels[i] for i in rows],
                                col_labels=[self.col_labels[j] for j in cols],
                                counts=arr[np.ix_(rows, cols)].tolist())


class AssociationMethod(str, Enum):
    CHI_SQUARE = "ChiSquare"
    FISHER_MC = "FisherMC"


class AssociationResult(BaseModel):
    method: AssociationMethod
    statistic: Optional[float] = None
    df: Optional[int] = Field(None, ge=0)
    p: Probability
    cramers_v: float = Field(..., ge=0.0, le=1.0)
    v_ci_lo: float
    v_ci_hi: float
    mc_standard_error: Optional[float] = None
    replicates: Optional[int] = None
    warnings: List[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_invariants(self) -> "AssociationResult":
        if not self.v_ci_lo <= self.cramers_v <= self.v_ci_hi:
            raise ValueError("confidence interval must contain Cramér's V")
        if (self.df is not None) != (self.method == AssociationMethod.CHI_SQUARE):
            raise ValueError("df is present exactly for the chi-square method")
        return self


class ConfusionMetrics(BaseModel):
    """Binary classification metrics; undefined ratios are None."""
    tp: int = Field(..., ge=0)
    fp: int = Field(..., ge=0)
    fn: int = Field(..., ge=0)
    tn: int = Field(..., ge=0)
    accuracy: Probability
    acc_ci_lo: Probability
    acc_ci_hi: Probability
    nir: Probability
    p_acc_gt_nir: Probability
    sensitivity: Optional[Probability] = None
    specificity: Optional[Probability] = None
    ppv: Optional[Probability] = None
    npv: Optional[Probability] = None
    f1: Optional[Probability] = None

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


class HistogramBin(BaseModel):
    bin_center: float
    count: int = Field(..., ge=0)


class PDifferenceSummary(BaseModel):
    positive: int = 0
    negative: int = 0
    zero: int = 0

    @property
    def total(self) -> int:
        return self.positive + self.negative + self.zero
