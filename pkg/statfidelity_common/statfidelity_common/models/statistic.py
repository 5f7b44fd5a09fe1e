# -*- coding: utf-8 -*-
from enum import Enum
from typing import Annotated, ClassVar, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

# 概率值，取值范围 [0, 1]
Probability = Annotated[float, Field(ge=0.0, le=1.0)]


class StatKind(str, Enum):
    STUDENT_T = "StudentT"
    F = "F"
    CHI_SQ = "ChiSq"
    Z = "Z"
    PEARSON_R = "PearsonR"


class Tails(str, Enum):
    ONE = "One"
    TWO = "Two"


class TestStatistic(BaseModel):
    """
    A reported test statistic with its degrees of freedom; the input of
    p-value recomputation.
    """
    model_config = ConfigDict(frozen=True)
    __test__: ClassVar[bool] = False

    kind: StatKind = Field(..., description="统计量类型")
    value: float = Field(..., description="统计量数值")
    df1: Optional[float] = Field(None, description="自由度（F 检验为分子自由度）")
    df2: Optional[float] = Field(None, description="F 检验分母自由度")
    n: Optional[int] = Field(None, description="样本量，仅用于相关系数 r")
    tails: Tails = Field(Tails.TWO, description="单尾或双尾")

    @model_validator(mode="after")
    def check_invariants(self) -> "TestStatistic":
        if self.df1 is not None and not self.df1 > 0:
            raise ValueError("df1 must be positive")
        if self.kind in (StatKind.STUDENT_T, StatKind.CHI_SQ, StatKind.F) and self.df1 is None:
            raise ValueError(f"{self.kind.value} requires df1")
        if self.kind == StatKind.F:
            if self.df2 is None or not self.df2 > 0:
                raise ValueError("F requires a positive df2")
        elif self.df2 is not None:
            raise ValueError("df2 is only defined for F")
        if self.kind == StatKind.Z and self.df1 is not None:
            raise ValueError("Z has no degrees of freedom")
        if self.kind == StatKind.PEARSON_R:
            if self.n is None or self.n < 3:
                raise ValueError("PearsonR requires n >= 3")
            if not -1.0 < self.value < 1.0:
                raise ValueError("PearsonR value must lie in (-1, 1)")
        elif self.n is not None:
            raise ValueError("n is only defined for PearsonR")
        if self.kind in (StatKind.F, StatKind.CHI_SQ) and self.value < 0:
            raise ValueError(f"{self.kind.value} value must be non-negative")
        return self

    @property
    def df(self) -> Optional[float]:
        """Degrees of freedom used by the reference distribution."""
        if self.kind == StatKind.PEARSON_R:
            return float(self.n - 2)
        return self.df1
