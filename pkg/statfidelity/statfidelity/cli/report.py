"""Human-readable tables and the proportions-by-year chart."""
from typing import Iterable, List, Optional

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402

from statfidelity_common.models.bundle import ComparisonReport, CorpusBundle, MlrReport, ValidationReport
from statfidelity_common.models.chart_data import ChartData
from statfidelity_common.models.corpus import AssociationMethod, AssociationResult, ConfusionMetrics
from statfidelity_common.models.outcomes import DocumentResult


def _fmt_p(p: float) -> str:
    return "< .001" if p < 0.001 else f"= {p:.3f}".replace("0.", ".", 1)


def _fmt(value: Optional[float], digits: int = 2) -> str:
    return "NA" if value is None else f"{value:.{digits}f}"


def format_document(result: DocumentResult) -> str:
    lines = [f"Paper {result.paper_id}: "
             f"{result.outcome.outcome.value if result.outcome else 'no p-values'}"]
    if result.tests:
        tests = pd.DataFrame([{
            "line": t.raw.span.line,
            "report": t.raw.render(),
            "recomputed p": f"[{t.recomputed_p_lo:.4f}, {t.recomputed_p_hi:.4f}]",
            "tails": t.tails.value,
            "outcome": t.outcome.value,
        } for t in result.tests])
        lines.append(tests.to_string(index=False))
    if result.incompletes:
        incompletes = pd.DataFrame([{
            "line": ip.span.line,
            "p": f"{ip.p_operator.value} {ip.p_text or ''}".strip(),
            "class": cls.value,
        } for ip, cls in zip(result.incompletes, result.incomplete_classes)])
        lines.append(incompletes.to_string(index=False))
    for d in result.diagnostics:
        lines.append(f"line {d.span.line}: could not evaluate: {d.message}")
    for d in result.scan_diagnostics:
        lines.append(f"line {d.span.line}: {d.message}")
    return "\n".join(lines)


def format_association(name: str, result: AssociationResult) -> str:
    if result.method == AssociationMethod.CHI_SQUARE:
        test = f"chi2({result.df}) = {result.statistic:.3f}, p {_fmt_p(result.p)}"
    else:
        test = (f"FET (MC, {result.replicates} replicates) p {_fmt_p(result.p)}"
                f" ± {result.mc_standard_error:.4f}")
    text = (f"{name}: {test}, Cramér's V = {result.cramers_v:.3f}, "
            f"95% CI [{result.v_ci_lo:.3f}, {result.v_ci_hi:.3f}]")
    return "\n".join([text] + [f"  warning: {w}" for w in result.warnings])


def format_bundle(bundle: CorpusBundle) -> str:
    lines = [f"{len(bundle.papers)} papers, {len(bundle.tests)} tests, "
             f"{len(bundle.failures)} failed files, {len(bundle.skipped)} papers without p-values"]
    for name, table in bundle.tables.items():
        df = pd.DataFrame(table.counts, index=table.row_labels, columns=table.col_labels)
        lines.append(f"\n{name}\n{df.to_string()}")
        if name in bundle.associations:
            lines.append(format_association(name, bundle.associations[name]))
    for failure in bundle.failures:
        lines.append(f"failed: {failure.path}: {failure.message}")
    return "\n".join(lines)


def format_comparison(report: ComparisonReport) -> str:
    table = report.table
    df = pd.DataFrame(table.counts, index=table.row_labels, columns=table.col_labels)
    return f"{df.to_string()}\n{format_association('comparison', report.result)}"


def format_confusion(title: str, m: ConfusionMetrics) -> str:
    return (f"{title}\n"
            f"  TP {m.tp}  FP {m.fp}  FN {m.fn}  TN {m.tn}\n"
            f"  Accuracy {_fmt(m.accuracy)}, 95% CI [{_fmt(m.acc_ci_lo)}, {_fmt(m.acc_ci_hi)}], "
            f"NIR {_fmt(m.nir)}, p(Acc > NIR) {_fmt_p(m.p_acc_gt_nir)}\n"
            f"  Sensitivity {_fmt(m.sensitivity)}, Specificity {_fmt(m.specificity)}, "
            f"PPV {_fmt(m.ppv)}, F1 {_fmt(m.f1)}")


def format_validation(report: ValidationReport) -> str:
    parts = [f"{report.n_joined} labelled tests ({report.unlabelled_tests} scanned tests unlabelled)",
             format_confusion("Error detection (positive = flagged error)", report.error_detection)]
    if report.significance_decision is not None:
        parts.append(format_confusion("Significance decision (positive = significant)",
                                      report.significance_decision))
    return "\n".join(parts)


def format_mlr(report: MlrReport) -> str:
    lines = [f"{report.granularity} observations: n = {report.n}, reference {report.reference_level}"]
    models = pd.DataFrame([{"model": name, "LL": s.log_likelihood, "parameters": s.n_parameters,
                            "converged": s.converged} for name, s in report.models.items()])
    lines.append(models.to_string(index=False))
    for name, c in report.comparisons.items():
        lines.append(f"LR {name}: chi2({c.df}) = {c.chi_sq:.3f}, p {_fmt_p(c.p)}, McFadden R2 = {c.mcfadden_r2:.3f}")
    for level, rows in report.coefficients.items():
        df = pd.DataFrame([r.model_dump() for r in rows]).set_index("term")
        lines.append(f"\nCoefficients for {level}\n{df.round(3).to_string()}")
    return "\n".join(lines)


def plot_year_series(charts: Iterable[ChartData], path: str) -> str:
    """Write the proportions-by-year panels as a reproducible SVG."""
    charts: List[ChartData] = list(charts)
    plt.rcParams["svg.hashsalt"] = "statfidelity"
    fig, axes = plt.subplots(len(charts), 1, figsize=(7, 3 * max(1, len(charts))), squeeze=False)
    for ax, chart in zip(axes[:, 0], charts):
        years = chart.x[0].data
        for series in chart.y:
            ax.plot(years, series.data, marker="o", label=series.name)
        ax.set_title(chart.title)
        ax.set_ylim(0, 1)
        ax.set_ylabel("share of papers")
        ax.legend(loc="upper left", fontsize="small")
    axes[-1, 0].set_xlabel("year")
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path
