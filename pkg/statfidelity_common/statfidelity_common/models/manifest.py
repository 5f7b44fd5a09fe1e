# -*- coding: utf-8 -*-
from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from statfidelity_common.models.corpus import EffectSizeReporting
from statfidelity_common.models.outcomes import Outcome


class ManifestRow(BaseModel):
    """语料清单中的一行：一篇论文及其编码属性"""
    paper_id: str = Field(..., min_length=1)
    text_path: str = Field(..., min_length=1)
    venue: str = Field(..., min_length=1)
    year: int
    mcc_used: bool = False
    effect_sizes: EffectSizeReporting = EffectSizeReporting.NONE
    alpha_override: Optional[float] = Field(None, gt=0.0, lt=1.0)


class CorpusManifest(BaseModel):
    rows: List[ManifestRow]

    @model_validator(mode="after")
    def check_unique_ids(self) -> "CorpusManifest":
        seen = set()
        for row in self.rows:
            if row.paper_id in seen:
                raise ValueError(f"duplicate paper_id {row.paper_id!r}")
            seen.add(row.paper_id)
        return self


class AuthorErrorCode(str, Enum):
    TYPO = "Typo"
    ROUNDING_ERROR = "RoundingError"
    ONE_TAILED_US = "OneTailedUS"
    MISCALCULATION = "Miscalculation"


class ToolErrorCode(str, Enum):
    PARSED_OK = "scParsedOK"
    CORRECT = "scCorrect"
    MISCLASSIFIED = "scMisclassified"
    MISSED_MC = "scMissedMC"


class GroundTruthRow(BaseModel):
    """Human coding of one complete test, joined to scans by paper_id + index."""
    paper_id: str = Field(..., min_length=1)
    test_index: int = Field(..., ge=0)
    human_outcome: Outcome
    author_error_code: Optional[AuthorErrorCode] = None
    tool_error_code: Optional[ToolErrorCode] = None

    @field_validator("author_error_code", "tool_error_code", mode="before")
    @classmethod
    def blank_to_none(cls, v):
        if v is None or (isinstance(v, str) and not v.strip()):
            return None
        if isinstance(v, float) and v != v:
            return None
        return v

    @property
    def key(self) -> str:
        return f"{self.paper_id}#{self.test_index}"
