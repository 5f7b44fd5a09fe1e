# -*- coding: utf-8 -*-
from typing import Dict, List, Optional, Union

import numpy as np
from pydantic import BaseModel, Field, model_validator

from statfidelity_common.models.statistic import Probability


class PredictorSpec(BaseModel):
    """
    回归自变量设置
    Which terms enter the linear predictor. An intercept is always present.
    """
    year: bool = Field(True, description="Year as an interval predictor")
    center_year: bool = Field(False, description="Subtract the mean year before fitting")
    venue: bool = Field(True, description="Venue as a dummy-coded factor")
    venue_reference: Optional[str] = Field(None, description="Reference level; default SOUPS, else first sorted")
    collapse_venues: Optional[Dict[str, str]] = Field(
        None, description="Venue relabelling; the key '*' catches every unlisted venue")

    @classmethod
    def collapsed(cls, keep: str = "SOUPS", other: str = "OTHER", **kwargs) -> "PredictorSpec":
        return cls(collapse_venues={keep: keep, "*": other}, venue_reference=kwargs.pop("venue_reference", keep),
                   **kwargs)

    def without(self, **terms: bool) -> "PredictorSpec":
        return self.model_copy(update=terms)


class ObservationRow(BaseModel):
    outcome: str
    venue: str = ""
    year: float = 0.0


class MLRModel(BaseModel):
    """A fitted multinomial logit; the reference level has implicit zero coefficients."""
    outcome_levels: List[str]
    reference_level: str
    term_names: List[str]
    coefficients: List[List[float]]
    covariance: List[List[float]]
    log_likelihood: float
    null_log_likelihood: float
    n: int = Field(..., ge=1)
    spec: PredictorSpec
    venue_levels: List[str] = Field(default_factory=list)
    year_center: float = 0.0
    year_range: List[float] = Field(default_factory=list)
    converged: bool = True
    iterations: int = 0
    data_fingerprint: str = ""
    warnings: List[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_shapes(self) -> "MLRModel":
        if self.reference_level not in self.outcome_levels:
            raise ValueError("reference level must be an outcome level")
        k, p = len(self.outcome_levels) - 1, len(self.term_names)
        if len(self.coefficients) != k or any(len(row) != p for row in self.coefficients):
            raise ValueError("coefficients must be (K-1) x P")
        if len(self.covariance) != k * p or any(len(row) != k * p for row in self.covariance):
            raise ValueError("covariance must be (K-1)P square")
        return self

    @property
    def contrast_levels(self) -> List[str]:
        """Non-reference outcome levels, in coefficient-row order."""
        return [lvl for lvl in self.outcome_levels if lvl != self.reference_level]

    @property
    def beta(self) -> np.ndarray:
        return np.asarray(self.coefficients, dtype=float)

    @property
    def cov(self) -> np.ndarray:
        return np.asarray(self.covariance, dtype=float)

    @property
    def n_parameters(self) -> int:
        return len(self.contrast_levels) * len(self.term_names)


class CoefficientRow(BaseModel):
    term: str
    b: float
    se: float = Field(..., gt=0.0)
    z: float
    p: Probability
    odds_ratio: float = Field(..., gt=0.0)
    or_ci_lo: float = Field(..., ge=0.0)
    or_ci_hi: float = Field(..., ge=0.0)


class FitComparison(BaseModel):
    chi_sq: float = Field(..., ge=0.0)
    df: int = Field(..., ge=0)
    p: Probability
    mcfadden_r2: float = Field(..., ge=0.0, lt=1.0)
    full_terms: List[str] = Field(default_factory=list)
    nested_terms: List[str] = Field(default_factory=list)


class EffectPoint(BaseModel):
    setting: Dict[str, Union[float, str]]
    probability: Probability
    lower: Probability
    upper: Probability


class EffectCurve(BaseModel):
    """Predicted probability of one outcome level over a grid of settings."""
    level: str
    confidence: float
    points: List[EffectPoint]
