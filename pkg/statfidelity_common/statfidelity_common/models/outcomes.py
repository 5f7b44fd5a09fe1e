# -*- coding: utf-8 -*-
from enum import Enum
from typing import Any, ClassVar, Dict, List, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from statfidelity_common.config import get_config
from statfidelity_common.models.reports import (IncompleteClass, IncompletePValue, RawReport,
                                                ScanDiagnostic, SourceSpan)
from statfidelity_common.models.statistic import Probability, Tails


class Outcome(str, Enum):
    CORRECT_NHST = "CorrectNHST"
    INCONSISTENCY = "Inconsistency"
    DECISION_ERROR = "DecisionError"
    INCOMPLETE = "Incomplete"


# Canonical row order of every outcome table
OUTCOME_ORDER: List[str] = [o.value for o in Outcome]

# Cramér's V intervals: noncentral chi-square inversion, or a bootstrap
CI_METHODS = ("noncentral", "basic", "percentile")
BOOTSTRAP_CI_METHODS = ("basic", "percentile")

TEST_OUTCOMES = (Outcome.CORRECT_NHST, Outcome.INCONSISTENCY, Outcome.DECISION_ERROR)


class SignificanceClaim(str, Enum):
    SIGNIFICANT = "Significant"
    NON_SIGNIFICANT = "NonSignificant"
    NO_CLAIM = "NoClaim"


class CheckConfig(BaseModel):
    """
    检验配置
    Run-level settings of the consistency check and the corpus statistics.
    """
    alpha: float = Field(0.05, gt=0.0, lt=1.0, description="显著性水平")
    one_tailed_detection: bool = Field(True, description="是否识别单尾检验")
    one_tailed_keywords: List[str] = Field(
        default_factory=lambda: ["one-tailed", "one-sided", "one-tail", "directional"])
    mcc_used: bool = Field(False, description="论文是否声明了多重比较校正")
    replicates: int = Field(100000, ge=1)
    bootstrap_replicates: int = Field(10000, ge=1)
    ci_method: str = Field("noncentral", description="Cramér V 置信区间方法")
    seed: int = Field(42)
    workers: int = Field(1, ge=1)

    @field_validator("ci_method")
    @classmethod
    def validate_ci_method(cls, v: str) -> str:
        if v not in CI_METHODS:
            raise ValueError(f"ci_method must be one of {CI_METHODS}")
        return v

    @classmethod
    def from_settings(cls, **overrides: Any) -> "CheckConfig":
        """Build from config.yaml/environment; non-None overrides win."""
        settings = get_config()
        values: Dict[str, Any] = {
            "alpha": settings.get("ALPHA", 0.05),
            "one_tailed_detection": settings.get("ONE_TAILED_DETECTION", True),
            "one_tailed_keywords": settings.get("ONE_TAILED_KEYWORDS",
                                                ["one-tailed", "one-sided", "one-tail", "directional"]),
            "replicates": settings.get("REPLICATES", 100000),
            "bootstrap_replicates": settings.get("BOOTSTRAP_REPLICATES", 10000),
            "ci_method": settings.get("CI_METHOD", "noncentral"),
            "seed": settings.get("SEED", 42),
            "workers": settings.get("WORKERS", 1),
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def for_paper(self, alpha_override: Optional[float] = None, mcc_used: Optional[bool] = None) -> "CheckConfig":
        update: Dict[str, Any] = {}
        if alpha_override is not None:
            update["alpha"] = alpha_override
        if mcc_used is not None:
            update["mcc_used"] = mcc_used
        return self.model_validate({**self.model_dump(), **update})


class EvaluatedTest(BaseModel):
    raw: RawReport
    recomputed_p_lo: Probability
    recomputed_p_hi: Probability
    outcome: Outcome
    one_tailed_applied: bool = False
    tails: Tails = Tails.TWO
    p_difference: Optional[float] = Field(None, description="reported minus recomputed midpoint, Eq reports only")
    reported_p_lo: Probability = 0.0
    reported_p_hi: Probability = 1.0
    reported_claim: SignificanceClaim = SignificanceClaim.NO_CLAIM
    recomputed_claim: SignificanceClaim = SignificanceClaim.NO_CLAIM
    mcc_suppressed: bool = False

    @model_validator(mode="after")
    def check_invariants(self) -> "EvaluatedTest":
        if self.recomputed_p_lo > self.recomputed_p_hi:
            raise ValueError("recomputed_p_lo must not exceed recomputed_p_hi")
        if self.outcome == Outcome.INCOMPLETE:
            raise ValueError("a complete report cannot be Incomplete")
        if self.outcome == Outcome.DECISION_ERROR:
            claims = {self.reported_claim, self.recomputed_claim}
            if SignificanceClaim.NO_CLAIM in claims or len(claims) != 2:
                raise ValueError("a DecisionError needs opposing significance claims")
        return self


class TestDiagnostic(BaseModel):
    """A report that could not be evaluated; the document carries on."""
    __test__: ClassVar[bool] = False

    index: int = Field(..., ge=0)
    span: SourceSpan
    message: str


class PaperOutcome(BaseModel):
    paper_id: str
    outcome: Outcome
    n_complete: int = Field(0, ge=0)
    n_incomplete: int = Field(0, ge=0)
    n_inconsistent: int = Field(0, ge=0)
    n_decision_errors: int = Field(0, ge=0)

    @model_validator(mode="after")
    def check_counts(self) -> "PaperOutcome":
        if (self.outcome == Outcome.INCOMPLETE) != (self.n_complete == 0 and self.n_incomplete > 0):
            raise ValueError("outcome is Incomplete exactly when there are only incomplete p-values")
        if self.n_inconsistent + self.n_decision_errors > self.n_complete:
            raise ValueError("more erroneous tests than complete tests")
        return self


class DocumentResult(BaseModel):
    """Everything the checker learned about one document."""
    paper_id: str
    tests: List[EvaluatedTest] = Field(default_factory=list)
    incompletes: List[IncompletePValue] = Field(default_factory=list)
    incomplete_classes: List[IncompleteClass] = Field(default_factory=list)
    diagnostics: List[TestDiagnostic] = Field(default_factory=list)
    scan_diagnostics: List[ScanDiagnostic] = Field(default_factory=list)
    outcome: Optional[PaperOutcome] = None

    @property
    def has_decision_error(self) -> bool:
        return any(t.outcome == Outcome.DECISION_ERROR for t in self.tests)
