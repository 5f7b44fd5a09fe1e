"""
Corpus workflow: scan every manifest document, aggregate, cross-tabulate
and test associations, producing one CorpusBundle.
"""
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

from tqdm import tqdm

from statfidelity_common.exceptions import StatFidelityError
from statfidelity_common.logger_config import logger
from statfidelity_common.models.bundle import CorpusBundle, FileFailure
from statfidelity_common.models.corpus import ContingencyTable, PaperRecord, TestRecord
from statfidelity_common.models.manifest import CorpusManifest, ManifestRow
from statfidelity_common.models.outcomes import CheckConfig, DocumentResult, Outcome
from statfidelity.analysis.association import associate
from statfidelity.analysis.contingency import build_contingency
from statfidelity.analysis.series import proportions_by_year
from statfidelity.check.document import evaluate_document
from statfidelity.check.histogram import p_difference_histogram, p_difference_summary
from statfidelity.extract.incomplete import compose_incompletes, incomplete_composition
from statfidelity.extract.scanner import DocumentScanner

DEFAULT_BIN_WIDTH = 0.01

# name -> (granularity, column dimension)
TABLES = {
    "paper_outcome_by_venue": ("paper", "venue"),
    "paper_outcome_by_year": ("paper", "year"),
    "test_outcome_by_venue": ("test", "venue"),
    "test_outcome_by_year": ("test", "year"),
}


def read_text(path: str) -> str:
    with open(path, "r", encoding="utf-8") as f:
        return f.read()


def document_test_records(row: ManifestRow, result: DocumentResult) -> List[TestRecord]:
    """One record per complete test, then one Incomplete record per bare p-value."""
    records = [TestRecord(
        paper_id=row.paper_id, index=i, venue=row.venue, year=row.year, outcome=t.outcome, complete=True,
        text=t.raw.render(), reported_claim=t.reported_claim, recomputed_claim=t.recomputed_claim,
        recomputed_p_lo=t.recomputed_p_lo, recomputed_p_hi=t.recomputed_p_hi, p_difference=t.p_difference,
        one_tailed_applied=t.one_tailed_applied,
    ) for i, t in enumerate(result.tests)]
    records.extend(TestRecord(
        paper_id=row.paper_id, index=i, venue=row.venue, year=row.year, outcome=Outcome.INCOMPLETE,
        complete=False, text=ip.p_text or "",
    ) for i, ip in enumerate(result.incompletes))
    return records


class CorpusRunner:
    """Runs the checker over a manifest with a bounded pool of document workers."""

    def __init__(self, cfg: CheckConfig, bin_width: float = DEFAULT_BIN_WIDTH, progress: bool = True):
        self.cfg = cfg
        self.bin_width = bin_width
        self.progress = progress
        self.scanner = DocumentScanner()

    def _evaluate(self, row: ManifestRow) -> DocumentResult:
        text = read_text(row.text_path)
        return evaluate_document(row.paper_id, text, self.cfg.for_paper(row.alpha_override, row.mcc_used),
                                 self.scanner)

    def scan(self, manifest: CorpusManifest) -> Tuple[List[Tuple[ManifestRow, DocumentResult]], List[FileFailure]]:
        """Evaluate every document; failures are collected, never raised."""
        results: Dict[str, Tuple[ManifestRow, DocumentResult]] = {}
        failures: List[FileFailure] = []
        rows = manifest.rows
        with tqdm(total=len(rows), desc="Scanning documents", disable=not self.progress) as pbar:
            with ThreadPoolExecutor(max_workers=max(1, self.cfg.workers)) as executor:
                futures = [(row, executor.submit(self._evaluate, row)) for row in rows]
                for row, future in futures:
                    try:
                        results[row.paper_id] = (row, future.result())
                    except (OSError, UnicodeDecodeError, StatFidelityError) as e:
                        logger.error(f"{row.paper_id}: {row.text_path}: {e}")
                        failures.append(FileFailure(paper_id=row.paper_id, path=row.text_path, message=str(e)))
                    pbar.update(1)
        ordered = [results[pid] for pid in sorted(results)]
        failures.sort(key=lambda f: f.paper_id)
        return ordered, failures

    def _table(self, name: str, papers: Sequence[PaperRecord], tests: Sequence[TestRecord]) -> Optional[ContingencyTable]:
        granularity, column = TABLES[name]
        records = papers if granularity == "paper" else tests
        try:
            return build_contingency(records, "outcome", column)
        except StatFidelityError as e:
            logger.warning(f"Skipping table {name}: {e}")
            return None

    def run(self, manifest: CorpusManifest) -> CorpusBundle:
        scanned, failures = self.scan(manifest)

        papers, tests, skipped = [], [], []
        evaluated, classes = [], []
        exact_significant = 0
        for row, result in scanned:
            evaluated.extend(result.tests)
            classes.extend(result.incomplete_classes)
            # exact bare p-values are judged against the alpha of their own paper
            paper_alpha = self.cfg.for_paper(row.alpha_override).alpha
            exact_significant += compose_incompletes(result.incompletes, paper_alpha,
                                                     result.incomplete_classes).exact_significant
            if result.outcome is None:
                skipped.append(row.paper_id)
                continue
            papers.append(PaperRecord(paper_id=row.paper_id, venue=row.venue, year=row.year,
                                      mcc_used=row.mcc_used, effect_sizes_reported=row.effect_sizes,
                                      outcome=result.outcome))
            tests.extend(document_test_records(row, result))

        tables, associations = {}, {}
        if papers:
            for name in TABLES:
                table = self._table(name, papers, tests)
                if table is None:
                    continue
                tables[name] = table
                try:
                    associations[name] = associate(table, self.cfg)
                except StatFidelityError as e:
                    logger.warning(f"No association test for {name}: {e}")

        logger.info(f"Corpus: {len(papers)} papers, {len(tests)} tests, {len(failures)} failures, "
                    f"{len(skipped)} without p-values")
        return CorpusBundle(
            config=self.cfg,
            papers=papers,
            tests=tests,
            tables=tables,
            associations=associations,
            p_difference_histogram=p_difference_histogram(evaluated, self.bin_width),
            p_difference_summary=p_difference_summary(evaluated),
            incomplete_composition=incomplete_composition(classes, [], self.cfg.alpha).model_copy(
                update={"exact_significant": exact_significant}),
            year_series=proportions_by_year(papers) if papers else [],
            failures=failures,
            skipped=skipped,
        )
