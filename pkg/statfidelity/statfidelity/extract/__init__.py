from statfidelity.extract.scanner import DocumentScanner, detect_one_tailed_context, scan_document
from statfidelity.extract.incomplete import classify_incomplete, compose_incompletes, incomplete_composition

__all__ = [
    "DocumentScanner",
    "detect_one_tailed_context",
    "scan_document",
    "classify_incomplete",
    "compose_incompletes",
    "incomplete_composition",
]
