# -*- coding: utf-8 -*-
from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from statfidelity_common.models.statistic import Probability, StatKind, TestStatistic
from statfidelity_common.utils.numbers import decimal_places, parse_number


class Relation(str, Enum):
    EQ = "Eq"
    LT = "Lt"
    GT = "Gt"
    LEQ = "Leq"
    GEQ = "Geq"
    DECLARED_NS = "DeclaredNS"
    DECLARED_SIG = "DeclaredSig"


NUMERIC_RELATIONS = (Relation.EQ, Relation.LT, Relation.GT, Relation.LEQ, Relation.GEQ)

RELATION_SYMBOLS: Dict[Relation, str] = {
    Relation.EQ: "=",
    Relation.LT: "<",
    Relation.GT: ">",
    Relation.LEQ: "≤",
    Relation.GEQ: "≥",
}

_STAT_SYMBOLS: Dict[StatKind, str] = {
    StatKind.STUDENT_T: "t",
    StatKind.F: "F",
    StatKind.CHI_SQ: "χ2",
    StatKind.Z: "z",
    StatKind.PEARSON_R: "r",
}


class SourceSpan(BaseModel):
    model_config = ConfigDict(frozen=True)

    byte_start: int = Field(..., ge=0)
    byte_end: int = Field(..., ge=0)
    line: int = Field(..., ge=1)

    @model_validator(mode="after")
    def check_order(self) -> "SourceSpan":
        if not self.byte_start < self.byte_end:
            raise ValueError("byte_start must precede byte_end")
        return self


class RawReport(BaseModel):
    """A complete statistical statement: statistic, degrees of freedom and p."""
    span: SourceSpan
    statistic: TestStatistic
    statistic_operator: Relation = Relation.EQ
    statistic_text: str
    statistic_decimals: int = Field(..., ge=0)
    p_operator: Relation
    p_text: str
    p_value: Probability
    p_decimals: int = Field(..., ge=0)
    context: str = ""

    @model_validator(mode="after")
    def check_texts(self) -> "RawReport":
        if self.p_operator not in NUMERIC_RELATIONS or self.statistic_operator not in NUMERIC_RELATIONS:
            raise ValueError("complete reports carry numeric relations only")
        if parse_number(self.statistic_text) != self.statistic.value:
            raise ValueError(f"statistic_text {self.statistic_text!r} does not reparse to {self.statistic.value}")
        if parse_number(self.p_text) != self.p_value:
            raise ValueError(f"p_text {self.p_text!r} does not reparse to {self.p_value}")
        if decimal_places(self.statistic_text) != self.statistic_decimals:
            raise ValueError("statistic_decimals does not match statistic_text")
        if decimal_places(self.p_text) != self.p_decimals:
            raise ValueError("p_decimals does not match p_text")
        return self

    def render(self) -> str:
        """Canonical text form; scanning it yields an equivalent report."""
        stat = self.statistic
        symbol = _STAT_SYMBOLS[stat.kind]
        if stat.kind == StatKind.F:
            head = f"{symbol}({_fmt_df(stat.df1)}, {_fmt_df(stat.df2)})"
        elif stat.kind == StatKind.Z:
            head = symbol
        elif stat.kind == StatKind.PEARSON_R:
            head = f"{symbol}({stat.n - 2})"
        else:
            head = f"{symbol}({_fmt_df(stat.df1)})"
        return (f"{head} {RELATION_SYMBOLS[self.statistic_operator]} {self.statistic_text}, "
                f"p {RELATION_SYMBOLS[self.p_operator]} {self.p_text}")

    def same_report(self, other: "RawReport") -> bool:
        """Equality of parsed content, ignoring where the report was found."""
        keys = ("statistic", "statistic_operator", "statistic_text", "statistic_decimals",
                "p_operator", "p_text", "p_value", "p_decimals")
        return all(getattr(self, key) == getattr(other, key) for key in keys)


def _fmt_df(df: Optional[float]) -> str:
    if df is None:
        return ""
    return str(int(df)) if float(df).is_integer() else repr(df)


class IncompletePValue(BaseModel):
    """A p-value reported without the statistic needed to recompute it."""
    span: SourceSpan
    p_operator: Relation
    p_value: Optional[Probability] = None
    p_text: Optional[str] = None
    context: str = ""

    @model_validator(mode="after")
    def check_value(self) -> "IncompletePValue":
        declared = self.p_operator in (Relation.DECLARED_NS, Relation.DECLARED_SIG)
        if not declared and self.p_value is None:
            raise ValueError("numeric p relations need a p_value")
        return self


class IncompleteClass(str, Enum):
    EXACT_P = "ExactP"
    SIG_AT_ALPHA = "SigAtAlpha"
    SIG_BELOW_ALPHA = "SigBelowAlpha"
    NON_SIG_DECLARED = "NonSigDeclared"
    BOUND_ABOVE_ALPHA = "BoundAboveAlpha"
    IMPOSSIBLE_ZERO = "ImpossibleZero"


class IncompleteComposition(BaseModel):
    """Counts and shares of incomplete p-values per class."""
    total: int = Field(0, ge=0)
    counts: Dict[IncompleteClass, int] = Field(default_factory=dict)
    proportions: Dict[IncompleteClass, float] = Field(default_factory=dict)
    exact_significant: int = Field(0, ge=0, description="exact p-values below alpha")


class ScanDiagnostic(BaseModel):
    span: SourceSpan
    message: str


class ScanResult(BaseModel):
    reports: List[RawReport] = Field(default_factory=list)
    incompletes: List[IncompletePValue] = Field(default_factory=list)
    diagnostics: List[ScanDiagnostic] = Field(default_factory=list)
