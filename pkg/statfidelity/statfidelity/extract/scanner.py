"""
Scanning plain text for complete statistical reports and bare p-values.

Matching runs on a length-preserving normalisation of the text (PDF
artifacts such as U+2212 minus mapped to ASCII), so every character offset
found there is also an offset into the original. Spans are reported in
UTF-8 bytes of the original text.
"""
from bisect import bisect_left
from itertools import accumulate
from typing import Iterable, List, Optional, Sequence, Tuple

from pydantic import ValidationError

from statfidelity_common.config import get_config
from statfidelity_common.exceptions import ParseError
from statfidelity_common.logger_config import logger
from statfidelity_common.models.reports import (IncompletePValue, RawReport, Relation, ScanDiagnostic,
                                                ScanResult, SourceSpan)
from statfidelity_common.models.statistic import StatKind, TestStatistic
from statfidelity_common.utils.numbers import decimal_places, parse_number
from statfidelity.extract.patterns import ExtractionPatterns

DEFAULT_ONE_TAILED_KEYWORDS = ["one-tailed", "one-sided", "one-tail", "directional"]


class _Rejected(Exception):
    """A match that looks like a report but cannot become one."""


class _TextIndex:
    """Character offset to (byte offset, line) lookups for one document."""

    def __init__(self, text: str):
        self._text = text
        self._bytes = list(accumulate((len(ch.encode("utf-8", "surrogatepass")) for ch in text), initial=0))

    def span(self, start: int, end: int) -> SourceSpan:
        return SourceSpan(byte_start=self._bytes[start], byte_end=self._bytes[end],
                          line=self._text.count("\n", 0, start) + 1)


def _relation(op_text: str) -> Relation:
    return Relation(ExtractionPatterns.OPERATOR_NAMES[op_text])


def _parse_df(text: str, label: str) -> float:
    df = parse_number(text)
    if df <= 0:
        raise _Rejected(f"{label} degrees of freedom must be positive, got {text}")
    return df


def _statistic_from_match(m) -> Tuple[TestStatistic, str]:
    """Build the statistic of a STATISTIC match; returns it with its value text."""
    value_text = m.group("value").replace(" ", "")
    value = parse_number(value_text)
    if m.group("t_df") is not None:
        kind, fields = StatKind.STUDENT_T, {"df1": _parse_df(m.group("t_df"), "t")}
    elif m.group("f_df1") is not None:
        kind, fields = StatKind.F, {"df1": _parse_df(m.group("f_df1"), "F"),
                                    "df2": _parse_df(m.group("f_df2"), "F")}
    elif m.group("r_df") is not None:
        df = _parse_df(m.group("r_df"), "r")
        if not float(df).is_integer():
            raise _Rejected(f"r degrees of freedom must be an integer, got {m.group('r_df')}")
        kind, fields = StatKind.PEARSON_R, {"n": int(df) + 2}
    elif m.group("z") is not None:
        kind, fields = StatKind.Z, {}
    else:
        kind, fields = StatKind.CHI_SQ, {"df1": _parse_df(m.group("chi_df"), "chi-square")}

    if kind in (StatKind.F, StatKind.CHI_SQ) and value < 0:
        raise _Rejected(f"negative {kind.value} value {value_text}")
    if kind == StatKind.PEARSON_R and abs(value) >= 1:
        raise _Rejected(f"correlation {value_text} outside (-1, 1)")
    try:
        return TestStatistic(kind=kind, value=value, **fields), value_text
    except ValidationError as e:
        raise _Rejected(e.errors()[0]["msg"])


def _overlaps(start: int, end: int, taken: Sequence[Tuple[int, int]]) -> bool:
    return any(start < t_end and t_start < end for t_start, t_end in taken)


class DocumentScanner:
    """
    Extracts RawReports (statistic + df + p) and IncompletePValues from text.

    A p clause binds to the nearest preceding statistic when it starts at
    most ``pairing_window`` characters after the statistic clause ends and
    no other statistic lies in between.
    """

    def __init__(self, pairing_window: Optional[int] = None, context_window: Optional[int] = None):
        settings = get_config()
        self.pairing_window = int(settings.get("PAIRING_WINDOW", 80) if pairing_window is None else pairing_window)
        self.context_window = int(settings.get("CONTEXT_WINDOW", 200) if context_window is None else context_window)

    def _context(self, text: str, start: int, end: int) -> str:
        return text[max(0, start - self.context_window): end + self.context_window]

    def scan(self, text: str) -> ScanResult:
        if not text:
            return ScanResult()
        normalized = text.translate(ExtractionPatterns.CHAR_MAP)
        index = _TextIndex(text)
        diagnostics: List[ScanDiagnostic] = []

        stats = list(ExtractionPatterns.STATISTIC.finditer(normalized))
        stat_spans = [(m.start(), m.end()) for m in stats]
        p_matches = [m for m in ExtractionPatterns.P_VALUE.finditer(normalized)
                     if not _overlaps(m.start(), m.end(), stat_spans)]
        p_starts = [m.start() for m in p_matches]
        used_p = set()

        reports: List[RawReport] = []
        report_spans: List[Tuple[int, int]] = []
        for i, sm in enumerate(stats):
            next_stat = stats[i + 1].start() if i + 1 < len(stats) else len(normalized)
            j = bisect_left(p_starts, sm.end())
            paired = None
            if j < len(p_matches) and p_starts[j] - sm.end() <= self.pairing_window and p_starts[j] < next_stat:
                paired = j
            if paired is None:
                diagnostics.append(ScanDiagnostic(span=index.span(sm.start(), sm.end()),
                                                  message="statistic without an adjacent p-value"))
                continue
            used_p.add(paired)
            pm = p_matches[paired]
            report_spans.append((sm.start(), pm.end()))
            try:
                reports.append(self._build_report(text, normalized, index, sm, pm))
            except (_Rejected, ParseError) as e:
                diagnostics.append(ScanDiagnostic(span=index.span(sm.start(), pm.end()), message=str(e)))

        incompletes: List[Tuple[int, IncompletePValue]] = []
        for j, pm in enumerate(p_matches):
            if j in used_p:
                continue
            try:
                value = parse_number(pm.group("value"))
                if value > 1:
                    raise _Rejected(f"p-value {pm.group('value')} above 1")
                incompletes.append((pm.start(), IncompletePValue(
                    span=index.span(pm.start(), pm.end()), p_operator=_relation(pm.group("op")),
                    p_value=value, p_text=pm.group("value"), context=self._context(text, pm.start(), pm.end()))))
            except (_Rejected, ParseError) as e:
                diagnostics.append(ScanDiagnostic(span=index.span(pm.start(), pm.end()), message=str(e)))

        # a declared form inside a statistic-to-p clause belongs to that report
        taken = report_spans + stat_spans + [(m.start(), m.end()) for m in p_matches]
        for pattern, relation in ((ExtractionPatterns.DECLARED_NS, Relation.DECLARED_NS),
                                  (ExtractionPatterns.DECLARED_SIG, Relation.DECLARED_SIG)):
            for m in pattern.finditer(normalized):
                if _overlaps(m.start(), m.end(), taken):
                    continue
                taken.append((m.start(), m.end()))
                incompletes.append((m.start(), IncompletePValue(
                    span=index.span(m.start(), m.end()), p_operator=relation,
                    p_text=text[m.start():m.end()], context=self._context(text, m.start(), m.end()))))

        incompletes.sort(key=lambda item: item[0])
        diagnostics.sort(key=lambda d: d.span.byte_start)
        if diagnostics:
            logger.debug(f"Scan produced {len(diagnostics)} diagnostics")
        return ScanResult(reports=reports, incompletes=[ip for _, ip in incompletes], diagnostics=diagnostics)

    def _build_report(self, text: str, normalized: str, index: _TextIndex, sm, pm) -> RawReport:
        statistic, value_text = _statistic_from_match(sm)
        p_text = pm.group("value")
        p_value = parse_number(p_text)
        if p_value > 1:
            raise _Rejected(f"p-value {p_text} above 1")
        try:
            return RawReport(
                span=index.span(sm.start(), pm.end()),
                statistic=statistic,
                statistic_operator=_relation(sm.group("op")),
                statistic_text=value_text,
                statistic_decimals=decimal_places(value_text),
                p_operator=_relation(pm.group("op")),
                p_text=p_text,
                p_value=p_value,
                p_decimals=decimal_places(p_text),
                context=self._context(text, sm.start(), pm.end()),
            )
        except ValidationError as e:
            raise _Rejected(e.errors()[0]["msg"])


def scan_document(text: str, scanner: Optional[DocumentScanner] = None) -> Tuple[List[RawReport], List[IncompletePValue]]:
    """Complete reports and bare p-values of ``text``, each in document order."""
    result = (scanner or DocumentScanner()).scan(text)
    return result.reports, result.incompletes


def detect_one_tailed_context(context: str, keywords: Optional[Iterable[str]] = None) -> bool:
    """True when any one-tailed keyword occurs in ``context``, ignoring case."""
    if not context:
        return False
    if keywords is None:
        keywords = get_config().get("ONE_TAILED_KEYWORDS", DEFAULT_ONE_TAILED_KEYWORDS)
    haystack = context.translate(ExtractionPatterns.CHAR_MAP).lower()
    return any(k.lower() in haystack for k in keywords if k)
