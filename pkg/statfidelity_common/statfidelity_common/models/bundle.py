# -*- coding: utf-8 -*-
from typing import Dict, List, Optional

from pydantic import BaseModel, Field

from statfidelity_common.models.chart_data import ChartData
from statfidelity_common.models.corpus import (AssociationResult, ConfusionMetrics, ContingencyTable, HistogramBin,
                                               PaperRecord, PDifferenceSummary, TestRecord)
from statfidelity_common.models.regression import CoefficientRow, EffectCurve, FitComparison
from statfidelity_common.models.outcomes import CheckConfig, DocumentResult
from statfidelity_common.models.reports import IncompleteComposition

BUNDLE_SCHEMA_VERSION = "1.0"


class FileFailure(BaseModel):
    paper_id: str
    path: str
    message: str


class CorpusBundle(BaseModel):
    """Everything one `corpus` run produces, in one schema-versioned document."""
    schema_version: str = BUNDLE_SCHEMA_VERSION
    config: CheckConfig
    papers: List[PaperRecord] = Field(default_factory=list)
    tests: List[TestRecord] = Field(default_factory=list)
    tables: Dict[str, ContingencyTable] = Field(default_factory=dict)
    associations: Dict[str, AssociationResult] = Field(default_factory=dict)
    p_difference_histogram: List[HistogramBin] = Field(default_factory=list)
    p_difference_summary: PDifferenceSummary = Field(default_factory=PDifferenceSummary)
    incomplete_composition: IncompleteComposition = Field(default_factory=IncompleteComposition)
    year_series: List[ChartData] = Field(default_factory=list)
    failures: List[FileFailure] = Field(default_factory=list)
    skipped: List[str] = Field(default_factory=list, description="papers with neither tests nor p-values")

    def outcome_counts(self) -> Dict[str, int]:
        counts: Dict[str, int] = {}
        for paper in self.papers:
            key = paper.outcome.outcome.value
            counts[key] = counts.get(key, 0) + 1
        return counts


class ScanReport(BaseModel):
    """Output of `scan` for a single document."""
    schema_version: str = BUNDLE_SCHEMA_VERSION
    path: str
    config: CheckConfig
    result: DocumentResult
    incomplete_composition: Optional[IncompleteComposition] = None


class ComparisonReport(BaseModel):
    """Output of `compare`: the 2 x K outcome table and its association test."""
    schema_version: str = BUNDLE_SCHEMA_VERSION
    table: ContingencyTable
    result: AssociationResult
    excluded_incomplete: bool = False


class ModelSummary(BaseModel):
    terms: List[str]
    log_likelihood: float
    n_parameters: int
    converged: bool
    warnings: List[str] = Field(default_factory=list)


class MlrReport(BaseModel):
    """Output of `mlr`: fitted family, LR tests, coefficients and effect curves."""
    schema_version: str = BUNDLE_SCHEMA_VERSION
    granularity: str
    reference_level: str
    n: int
    null_log_likelihood: float
    models: Dict[str, ModelSummary] = Field(default_factory=dict)
    comparisons: Dict[str, FitComparison] = Field(default_factory=dict)
    coefficients: Dict[str, List[CoefficientRow]] = Field(default_factory=dict)
    effects: List[EffectCurve] = Field(default_factory=list)


class ValidationReport(BaseModel):
    """Output of `validate`: tool-versus-human and author-decision confusion metrics."""
    schema_version: str = BUNDLE_SCHEMA_VERSION
    n_joined: int
    unlabelled_tests: int = 0
    error_detection: ConfusionMetrics
    significance_decision: Optional[ConfusionMetrics] = None
