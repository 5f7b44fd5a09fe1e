from typing import Optional

from statfidelity_common.exceptions import DomainError
from statfidelity_common.logger_config import logger
from statfidelity_common.models.outcomes import CheckConfig, DocumentResult, TestDiagnostic
from statfidelity.check.aggregate import aggregate_paper
from statfidelity.check.consistency import evaluate_test
from statfidelity.extract.incomplete import classify_incomplete
from statfidelity.extract.scanner import DocumentScanner


def evaluate_document(paper_id: str, text: str, cfg: Optional[CheckConfig] = None,
                      scanner: Optional[DocumentScanner] = None) -> DocumentResult:
    """
    Scan one document, evaluate its reports and aggregate the paper.

    A report the kernel rejects becomes a TestDiagnostic and the rest of
    the document is still evaluated. A document without any p-value gets
    ``outcome=None``.
    """
    cfg = cfg or CheckConfig()
    scan = (scanner or DocumentScanner()).scan(text)

    tests, diagnostics = [], []
    for index, raw in enumerate(scan.reports):
        try:
            tests.append(evaluate_test(raw, cfg))
        except DomainError as e:
            logger.warning(f"{paper_id}: report {index} could not be evaluated: {e}")
            diagnostics.append(TestDiagnostic(index=index, span=raw.span, message=str(e)))

    classes = [classify_incomplete(ip, cfg.alpha) for ip in scan.incompletes]
    outcome = None
    if tests or scan.incompletes:
        outcome = aggregate_paper(paper_id, tests, scan.incompletes)
    else:
        logger.info(f"{paper_id}: no p-values found, paper left out of the sample")

    return DocumentResult(
        paper_id=paper_id,
        tests=tests,
        incompletes=scan.incompletes,
        incomplete_classes=classes,
        diagnostics=diagnostics,
        scan_diagnostics=scan.diagnostics,
        outcome=outcome,
    )
