from decimal import Decimal

import pytest
from pydantic import ValidationError

from statfidelity_common.exceptions import (DegenerateTableError, JoinMismatchError, ParseError,
                                            RankDeficiencyError, require)
from statfidelity_common.models.corpus import AssociationMethod, AssociationResult, ContingencyTable
from statfidelity_common.models.manifest import CorpusManifest, GroundTruthRow, ManifestRow
from statfidelity_common.models.outcomes import (EvaluatedTest, Outcome, PaperOutcome,
                                                 SignificanceClaim)
from statfidelity_common.models.reports import IncompletePValue, RawReport, Relation, SourceSpan
from statfidelity_common.models.statistic import StatKind, Tails, TestStatistic
from statfidelity_common.utils.numbers import decimal_places, normalize_number_text, parse_decimal, parse_number


class TestStatisticInvariants:
    def test_t(self):
        stat = TestStatistic(kind=StatKind.STUDENT_T, value=2.52, df1=24)
        assert stat.df == 24
        assert stat.tails == Tails.TWO

    def test_r_uses_n_minus_two(self):
        assert TestStatistic(kind=StatKind.PEARSON_R, value=0.3, n=42).df == 40

    @pytest.mark.parametrize("kwargs", [
        dict(kind=StatKind.STUDENT_T, value=2.0),
        dict(kind=StatKind.STUDENT_T, value=2.0, df1=0),
        dict(kind=StatKind.F, value=3.0, df1=2),
        dict(kind=StatKind.F, value=-1.0, df1=2, df2=10),
        dict(kind=StatKind.CHI_SQ, value=-0.1, df1=1),
        dict(kind=StatKind.Z, value=1.0, df1=3),
        dict(kind=StatKind.STUDENT_T, value=1.0, df1=3, df2=4),
        dict(kind=StatKind.PEARSON_R, value=0.3, n=2),
        dict(kind=StatKind.PEARSON_R, value=1.0, n=30),
        dict(kind=StatKind.Z, value=1.0, n=30),
    ])
    def test_rejected(self, kwargs):
        with pytest.raises(ValidationError):
            TestStatistic(**kwargs)

    def test_frozen(self):
        stat = TestStatistic(kind=StatKind.Z, value=1.96)
        with pytest.raises(ValidationError):
            stat.value = 2.0


def raw(p_text="0.019", p_value=0.019, statistic_text="2.52", **overrides):
    fields = dict(
        span=SourceSpan(byte_start=0, byte_end=22, line=1),
        statistic=TestStatistic(kind=StatKind.STUDENT_T, value=2.52, df1=24),
        statistic_text=statistic_text,
        statistic_decimals=decimal_places(statistic_text),
        p_operator=Relation.EQ,
        p_text=p_text,
        p_value=p_value,
        p_decimals=decimal_places(p_text),
    )
    fields.update(overrides)
    return RawReport(**fields)


class TestRawReport:
    def test_render(self):
        assert raw(p_text=".019").render() == "t(24) = 2.52, p = .019"

    def test_render_f(self):
        report = raw(statistic=TestStatistic(kind=StatKind.F, value=4.1, df1=1, df2=30), statistic_text="4.10")
        assert report.render().startswith("F(1, 30) = 4.10")

    def test_text_must_reparse(self):
        with pytest.raises(ValidationError):
            raw(p_text=".020")

    def test_decimals_must_match(self):
        with pytest.raises(ValidationError):
            raw(p_decimals=2)

    def test_declared_relation_rejected(self):
        with pytest.raises(ValidationError):
            raw(p_operator=Relation.DECLARED_NS)

    def test_same_report_ignores_span(self):
        moved = raw(span=SourceSpan(byte_start=40, byte_end=62, line=3))
        assert raw().same_report(moved)

    def test_span_order(self):
        with pytest.raises(ValidationError):
            SourceSpan(byte_start=5, byte_end=5, line=1)


def test_incomplete_numeric_needs_value():
    span = SourceSpan(byte_start=0, byte_end=8, line=1)
    assert IncompletePValue(span=span, p_operator=Relation.DECLARED_NS).p_value is None
    with pytest.raises(ValidationError):
        IncompletePValue(span=span, p_operator=Relation.LT)


class TestContingencyTable:
    def test_shape(self):
        with pytest.raises(ValidationError):
            ContingencyTable(row_labels=["a", "b"], col_labels=["x", "y"], counts=[[1, 2]])
        with pytest.raises(ValidationError):
            ContingencyTable(row_labels=["a"], col_labels=["x", "y"], counts=[[1, 2]])
        with pytest.raises(ValidationError):
            ContingencyTable(row_labels=["a", "b"], col_labels=["x", "y"], counts=[[1, -2], [0, 1]])

    def test_drop_empty_and_transpose(self):
        table = ContingencyTable(row_labels=["a", "b", "c"], col_labels=["x", "y", "z"],
                                 counts=[[1, 0, 2], [0, 0, 0], [3, 0, 4]])
        trimmed = table.drop_empty()
        assert trimmed.row_labels == ["a", "c"] and trimmed.col_labels == ["x", "z"]
        assert trimmed.transpose().counts == [[1, 3], [2, 4]]
        assert trimmed.total == 10


def test_association_ci_contains_v():
    with pytest.raises(ValidationError):
        AssociationResult(method=AssociationMethod.CHI_SQUARE, statistic=1.0, df=1, p=0.3,
                          cramers_v=0.2, v_ci_lo=0.25, v_ci_hi=0.4)
    with pytest.raises(ValidationError):
        AssociationResult(method=AssociationMethod.FISHER_MC, df=2, p=0.3, cramers_v=0.2,
                          v_ci_lo=0.1, v_ci_hi=0.4)


class TestPaperOutcome:
    def test_incomplete_only_when_nothing_complete(self):
        assert PaperOutcome(paper_id="p", outcome=Outcome.INCOMPLETE, n_incomplete=3).n_complete == 0
        with pytest.raises(ValidationError):
            PaperOutcome(paper_id="p", outcome=Outcome.INCOMPLETE, n_complete=1, n_incomplete=3)
        with pytest.raises(ValidationError):
            PaperOutcome(paper_id="p", outcome=Outcome.CORRECT_NHST, n_incomplete=3)

    def test_error_counts_bounded(self):
        with pytest.raises(ValidationError):
            PaperOutcome(paper_id="p", outcome=Outcome.INCONSISTENCY, n_complete=1, n_inconsistent=1,
                         n_decision_errors=1)


def test_decision_error_needs_opposing_claims():
    with pytest.raises(ValidationError):
        EvaluatedTest(raw=raw(), recomputed_p_lo=0.018, recomputed_p_hi=0.019, outcome=Outcome.DECISION_ERROR,
                      reported_claim=SignificanceClaim.SIGNIFICANT,
                      recomputed_claim=SignificanceClaim.SIGNIFICANT)
    test = EvaluatedTest(raw=raw(), recomputed_p_lo=0.3, recomputed_p_hi=0.31, outcome=Outcome.DECISION_ERROR,
                         reported_claim=SignificanceClaim.SIGNIFICANT,
                         recomputed_claim=SignificanceClaim.NON_SIGNIFICANT)
    assert test.outcome == Outcome.DECISION_ERROR


class TestManifestModels:
    def test_duplicate_ids(self):
        row = dict(paper_id="p1", text_path="a.txt", venue="SOUPS", year=2010)
        with pytest.raises(ValidationError):
            CorpusManifest(rows=[ManifestRow(**row), ManifestRow(**row)])

    def test_alpha_override_range(self):
        with pytest.raises(ValidationError):
            ManifestRow(paper_id="p1", text_path="a.txt", venue="SOUPS", year=2010, alpha_override=1.5)

    @pytest.mark.parametrize("blank", ["", "  ", None, float("nan")])
    def test_truth_blank_codes(self, blank):
        row = GroundTruthRow(paper_id="p1", test_index=2, human_outcome="Inconsistency",
                             author_error_code=blank, tool_error_code=blank)
        assert row.author_error_code is None and row.tool_error_code is None
        assert row.key == "p1#2"

    def test_truth_codes(self):
        row = GroundTruthRow(paper_id="p1", test_index=0, human_outcome="DecisionError",
                             author_error_code="OneTailedUS", tool_error_code="scMissedMC")
        assert row.author_error_code.value == "OneTailedUS"
        with pytest.raises(ValidationError):
            GroundTruthRow(paper_id="p1", test_index=0, human_outcome="Wrong")


class TestNumbers:
    @pytest.mark.parametrize("text, expected", [
        (".019", 0.019), ("1,234.5", 1234.5), ("−2.31", -2.31), ("–0.5", -0.5), ("1e-5", 1e-5), (" 3 ", 3.0),
    ])
    def test_parse(self, text, expected):
        assert parse_number(text) == expected

    def test_decimal_exact(self):
        assert parse_decimal(".10") == Decimal("0.10")
        assert decimal_places(".10") == 2
        assert decimal_places("12") == 0
        assert decimal_places("1e-5") == 5

    @pytest.mark.parametrize("text", ["", "abc", "1.2.3", "inf", "NaN"])
    def test_rejected(self, text):
        with pytest.raises(ParseError):
            parse_decimal(text)

    def test_normalize(self):
        assert normalize_number_text("‐1,000") == "-1000"


def test_exception_messages():
    with pytest.raises(DegenerateTableError, match="margin"):
        require(False, DegenerateTableError, "zero margin")
    require(True, DegenerateTableError, "never raised")
    assert "Year copy" in str(RankDeficiencyError(["Year", "Year copy"]))
    assert JoinMismatchError(["a#1", "b#2"]).orphans == ["a#1", "b#2"]
