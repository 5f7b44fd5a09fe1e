from statfidelity_common.models.statistic import Probability, StatKind, Tails, TestStatistic
from statfidelity_common.models.reports import (IncompleteClass, IncompleteComposition, IncompletePValue,
                                                RawReport, Relation, ScanDiagnostic, ScanResult, SourceSpan)
from statfidelity_common.models.outcomes import (CheckConfig, DocumentResult, EvaluatedTest, OUTCOME_ORDER,
                                                 Outcome, PaperOutcome, SignificanceClaim, TestDiagnostic)
from statfidelity_common.models.corpus import (AssociationMethod, AssociationResult, ConfusionMetrics,
                                               ContingencyTable, EffectSizeReporting, HistogramBin,
                                               PaperRecord, PDifferenceSummary, TestRecord)
from statfidelity_common.models.chart_data import ChartData, SeriesItem
from statfidelity_common.models.regression import (CoefficientRow, EffectCurve, EffectPoint, FitComparison,
                                                   MLRModel, ObservationRow, PredictorSpec)
from statfidelity_common.models.manifest import (AuthorErrorCode, CorpusManifest, GroundTruthRow, ManifestRow,
                                                 ToolErrorCode)
from statfidelity_common.models.bundle import (BUNDLE_SCHEMA_VERSION, ComparisonReport, CorpusBundle, FileFailure,
                                              MlrReport, ModelSummary, ScanReport, ValidationReport)
