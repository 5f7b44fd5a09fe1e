"""
statfidelity: consistency checks of reported NHST results.

Recomputes p-values from reported t, F, chi-square, z and r statistics,
classifies reports and papers, and analyses outcome distributions over a
corpus.
"""
from statfidelity.kernel import p_from_statistic, p_interval
from statfidelity.extract import DocumentScanner, scan_document
from statfidelity.check import aggregate_paper, evaluate_document, evaluate_test

__all__ = [
    "p_from_statistic",
    "p_interval",
    "DocumentScanner",
    "scan_document",
    "aggregate_paper",
    "evaluate_document",
    "evaluate_test",
]
