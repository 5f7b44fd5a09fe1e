"""
statfidelity command line.

Exit codes: 0 success, 1 usage or input error, 2 a scan found a
DecisionError.
"""
import argparse
import os
import sys
from typing import Dict, List, Optional, Sequence

from statfidelity_common.config import get_config
from statfidelity_common.exceptions import (DegenerateTableError, EmptyInputError, JoinMismatchError,
                                            StatFidelityError, require)
from statfidelity_common.logger_config import logger, setup_logging
from statfidelity_common.models.bundle import (ComparisonReport, CorpusBundle, MlrReport, ModelSummary, ScanReport,
                                               ValidationReport)
from statfidelity_common.models.corpus import ContingencyTable
from statfidelity_common.models.outcomes import OUTCOME_ORDER, CheckConfig, Outcome, SignificanceClaim
from statfidelity_common.models.regression import ObservationRow, PredictorSpec
from statfidelity.analysis.association import associate
from statfidelity.analysis.confusion import confusion_metrics
from statfidelity.check.document import evaluate_document
from statfidelity.cli import report
from statfidelity.cli.io import load_bundle, load_distribution, load_ground_truth, load_manifest, save_bundle
from statfidelity.cli.pipeline import DEFAULT_BIN_WIDTH, CorpusRunner, read_text
from statfidelity.extract.incomplete import compose_incompletes
from statfidelity.regression.multinomial import coefficient_table, fit_model_family, lr_test
from statfidelity.regression.effects import effect_display

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_DECISION_ERROR = 2

ERROR_OUTCOMES = (Outcome.INCONSISTENCY, Outcome.DECISION_ERROR)


class _ArgumentParser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; 2 is reserved for decision errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _emit(text: str) -> None:
    sys.stdout.write(text)
    if not text.endswith("\n"):
        sys.stdout.write("\n")


def cmd_scan(args) -> int:
    cfg = CheckConfig.from_settings(alpha=args.alpha,
                                    one_tailed_detection=False if args.no_one_tailed else None,
                                    mcc_used=True if args.mcc else None)
    text = read_text(args.file)
    result = evaluate_document(os.path.basename(args.file), text, cfg)
    if args.json:
        scan_report = ScanReport(path=args.file, config=cfg, result=result,
                                 incomplete_composition=compose_incompletes(result.incompletes, cfg.alpha,
                                                                            result.incomplete_classes))
        _emit(scan_report.model_dump_json(indent=2))
    else:
        _emit(report.format_document(result))
    return EXIT_DECISION_ERROR if result.has_decision_error else EXIT_OK


def cmd_corpus(args) -> int:
    cfg = CheckConfig.from_settings(alpha=args.alpha, seed=args.seed, replicates=args.replicates,
                                    workers=args.workers)
    manifest = load_manifest(args.manifest)
    bundle = CorpusRunner(cfg, bin_width=args.bin_width, progress=not args.quiet).run(manifest)
    save_bundle(bundle, args.out)
    if args.plot and bundle.year_series:
        report.plot_year_series(bundle.year_series, os.path.join(args.out, "proportions_by_year.svg"))
    _emit(report.format_bundle(bundle))
    if manifest.rows and len(bundle.failures) == len(manifest.rows):
        logger.error("Every document failed")
        return EXIT_ERROR
    return EXIT_OK


def comparison_table(a: Dict[str, int], b: Dict[str, int], labels: Sequence[str],
                     exclude_incomplete: bool = False) -> ContingencyTable:
    """2 x K table of paper outcomes; outcomes absent from both inputs are dropped."""
    outcomes = [o for o in OUTCOME_ORDER
                if not (exclude_incomplete and o == Outcome.INCOMPLETE.value) and a.get(o, 0) + b.get(o, 0) > 0]
    require(len(outcomes) >= 2, DegenerateTableError, f"Need at least two outcome categories, got {outcomes}")
    return ContingencyTable(row_labels=list(labels), col_labels=outcomes,
                            counts=[[a.get(o, 0) for o in outcomes], [b.get(o, 0) for o in outcomes]])


def cmd_compare(args) -> int:
    cfg = CheckConfig.from_settings(seed=args.seed, replicates=args.replicates)
    labels = [os.path.basename(os.path.normpath(p)) for p in (args.bundle_a, args.bundle_b)]
    if labels[0] == labels[1]:
        labels = ["A", "B"]
    table = comparison_table(load_distribution(args.bundle_a), load_distribution(args.bundle_b), labels,
                             args.exclude_incomplete)
    result = ComparisonReport(table=table, result=associate(table, cfg), excluded_incomplete=args.exclude_incomplete)
    _emit(result.model_dump_json(indent=2) if args.json else report.format_comparison(result))
    return EXIT_OK


def observations(bundle: CorpusBundle, granularity: str) -> List[ObservationRow]:
    if granularity == "paper":
        return [ObservationRow(outcome=p.outcome.outcome.value, venue=p.venue, year=p.year) for p in bundle.papers]
    return [ObservationRow(outcome=t.outcome.value, venue=t.venue, year=t.year) for t in bundle.tests]


def run_mlr(rows: Sequence[ObservationRow], spec: PredictorSpec, reference: Optional[str] = None,
            granularity: str = "test", confidence: float = 0.95,
            workers: Optional[int] = None) -> MlrReport:
    """Fit the model family and collect LR tests, coefficients and effect curves of the fullest model."""
    if workers is None:
        workers = int(get_config().get("WORKERS", 1))
    models = fit_model_family(rows, spec, reference, workers=workers)
    null = models["null"]
    comparisons = {f"{name} vs null": lr_test(model, null) for name, model in models.items() if name != "null"}
    if "year+venue" in models:
        comparisons["year+venue vs year"] = lr_test(models["year+venue"], models["year"])
        comparisons["year+venue vs venue"] = lr_test(models["year+venue"], models["venue"])
    fullest = list(models.values())[-1]

    years = range(int(fullest.year_range[0]), int(fullest.year_range[1]) + 1) if spec.year else [None]
    venues = fullest.venue_levels if len(fullest.venue_levels) > 1 else [None]
    grid = [{k: v for k, v in (("year", y), ("venue", venue)) if v is not None} for venue in venues for y in years]
    return MlrReport(
        granularity=granularity,
        reference_level=fullest.reference_level,
        n=fullest.n,
        null_log_likelihood=fullest.null_log_likelihood,
        models={name: ModelSummary(terms=m.term_names, log_likelihood=m.log_likelihood,
                                   n_parameters=m.n_parameters, converged=m.converged, warnings=m.warnings)
                for name, m in models.items()},
        comparisons=comparisons,
        coefficients={level: coefficient_table(fullest, level, confidence) for level in fullest.contrast_levels},
        effects=effect_display(fullest, grid, confidence),
    )


def cmd_mlr(args) -> int:
    bundle = load_bundle(args.bundle)
    terms = set(args.terms)
    collapse = {args.collapse_venues: args.collapse_venues, "*": "OTHER"} if args.collapse_venues else None
    spec = PredictorSpec(year="year" in terms, venue="venue" in terms, center_year=args.center_year,
                         collapse_venues=collapse,
                         venue_reference=args.venue_reference or (args.collapse_venues if collapse else None))
    result = run_mlr(observations(bundle, args.granularity), spec, args.reference, args.granularity,
                     args.confidence, args.workers)
    _emit(result.model_dump_json(indent=2) if args.json else report.format_mlr(result))
    return EXIT_OK


def validate_bundle(bundle: CorpusBundle, truth_rows) -> ValidationReport:
    """
    Join human coding to scanned complete tests and score both decisions.

    Raises:
        JoinMismatchError: truth rows without a scanned test
    """
    require(len(truth_rows) > 0, EmptyInputError, "Ground truth has no rows")
    scanned = {(t.paper_id, t.index): t for t in bundle.tests if t.complete}
    orphans = [row.key for row in truth_rows if (row.paper_id, row.test_index) not in scanned]
    if orphans:
        raise JoinMismatchError(orphans)

    counts = {"tp": 0, "fp": 0, "fn": 0, "tn": 0}
    decision = {"tp": 0, "fp": 0, "fn": 0, "tn": 0}
    for row in truth_rows:
        test = scanned[(row.paper_id, row.test_index)]
        _tally(counts, test.outcome in ERROR_OUTCOMES, row.human_outcome in ERROR_OUTCOMES)
        if SignificanceClaim.NO_CLAIM not in (test.reported_claim, test.recomputed_claim):
            _tally(decision, test.reported_claim == SignificanceClaim.SIGNIFICANT,
                   test.recomputed_claim == SignificanceClaim.SIGNIFICANT)
    return ValidationReport(
        n_joined=len(truth_rows),
        unlabelled_tests=len(scanned) - len({(r.paper_id, r.test_index) for r in truth_rows}),
        error_detection=confusion_metrics(**counts),
        significance_decision=confusion_metrics(**decision) if sum(decision.values()) else None,
    )


def _tally(counts: Dict[str, int], predicted: bool, actual: bool) -> None:
    key = ("t" if predicted == actual else "f") + ("p" if predicted else "n")
    counts[key] += 1


def cmd_validate(args) -> int:
    result = validate_bundle(load_bundle(args.bundle), load_ground_truth(args.truth))
    _emit(result.model_dump_json(indent=2) if args.json else report.format_validation(result))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="statfidelity",
                             description="Check the consistency of reported test statistics and p-values.")
    parser.add_argument("--log-level", default=None, help="loguru level, e.g. DEBUG")
    sub = parser.add_subparsers(dest="command", required=True)

    scan = sub.add_parser("scan", help="check one plain-text document")
    scan.add_argument("file")
    scan.add_argument("--alpha", type=float, default=None)
    scan.add_argument("--no-one-tailed", action="store_true", help="disable one-tailed rescue")
    scan.add_argument("--mcc", action="store_true", help="the paper corrects for multiple comparisons")
    scan.add_argument("--json", action="store_true")
    scan.set_defaults(handler=cmd_scan)

    corpus = sub.add_parser("corpus", help="check every document of a manifest")
    corpus.add_argument("manifest")
    corpus.add_argument("--out", default="statfidelity_out")
    corpus.add_argument("--seed", type=int, default=None)
    corpus.add_argument("--replicates", type=int, default=None)
    corpus.add_argument("--workers", type=int, default=None)
    corpus.add_argument("--alpha", type=float, default=None)
    corpus.add_argument("--bin-width", type=float, default=DEFAULT_BIN_WIDTH)
    corpus.add_argument("--plot", action="store_true", help="also write proportions_by_year.svg")
    corpus.add_argument("--quiet", action="store_true", help="no progress bar")
    corpus.set_defaults(handler=cmd_corpus)

    compare = sub.add_parser("compare", help="compare two paper-outcome distributions")
    compare.add_argument("bundle_a")
    compare.add_argument("bundle_b")
    compare.add_argument("--exclude-incomplete", action="store_true")
    compare.add_argument("--seed", type=int, default=None)
    compare.add_argument("--replicates", type=int, default=None)
    compare.add_argument("--json", action="store_true")
    compare.set_defaults(handler=cmd_compare)

    mlr = sub.add_parser("mlr", help="multinomial logistic regression of outcomes")
    mlr.add_argument("bundle")
    mlr.add_argument("--terms", nargs="*", choices=["year", "venue"], default=["year", "venue"])
    mlr.add_argument("--collapse-venues", nargs="?", const="SOUPS", default=None, metavar="KEEP",
                     help="keep this venue, merge every other venue into OTHER")
    granularity = mlr.add_mutually_exclusive_group()
    granularity.add_argument("--per-test", dest="granularity", action="store_const", const="test")
    granularity.add_argument("--per-paper", dest="granularity", action="store_const", const="paper")
    mlr.set_defaults(granularity="test")
    mlr.add_argument("--reference", default=None, help="reference outcome level (default Incomplete)")
    mlr.add_argument("--workers", type=int, default=None, help="models fitted in parallel")
    mlr.add_argument("--venue-reference", default=None)
    mlr.add_argument("--center-year", action="store_true")
    mlr.add_argument("--confidence", type=float, default=0.95)
    mlr.add_argument("--json", action="store_true")
    mlr.set_defaults(handler=cmd_mlr)

    validate = sub.add_parser("validate", help="score the checker against human coding")
    validate.add_argument("bundle")
    validate.add_argument("truth")
    validate.add_argument("--json", action="store_true")
    validate.set_defaults(handler=cmd_validate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_ERROR
    setup_logging(level=args.log_level)
    try:
        return args.handler(args)
    except (StatFidelityError, OSError, ValueError) as e:
        location = getattr(args, "file", None) or getattr(args, "manifest", None) or getattr(args, "bundle", "")
        message = str(e)
        if isinstance(e, UnicodeDecodeError):
            message = f"{location}: not valid UTF-8 ({e.reason} at byte {e.start})"
        elif isinstance(e, OSError) and e.filename:
            message = f"{e.filename}: {e.strerror}"
        sys.stderr.write(f"statfidelity {args.command}: error: {message}\n")
        return EXIT_ERROR
