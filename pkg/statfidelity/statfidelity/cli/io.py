"""Reading manifests and ground truth, writing and reloading bundles."""
import os
from typing import Dict, List

import pandas as pd
from pydantic import ValidationError

from statfidelity_common.config import get_config
from statfidelity_common.exceptions import EmptyInputError, ManifestError, require
from statfidelity_common.logger_config import logger
from statfidelity_common.models.bundle import CorpusBundle
from statfidelity_common.models.corpus import TestRecord
from statfidelity_common.models.manifest import CorpusManifest, GroundTruthRow, ManifestRow
from statfidelity_common.models.outcomes import OUTCOME_ORDER

MANIFEST_COLUMNS = ["paper_id", "text_path", "venue", "year"]
TRUTH_COLUMNS = ["paper_id", "test_index", "human_outcome"]
BUNDLE_FILE = "bundle.json"

_TRUE = {"true", "1", "yes", "y", "t"}
_FALSE = {"false", "0", "no", "n", "f", ""}


def _read_csv(path: str, required: List[str]) -> pd.DataFrame:
    try:
        df = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except pd.errors.EmptyDataError:
        raise ManifestError(f"{path}: file is empty, a header row is required")
    missing = [c for c in required if c not in df.columns]
    require(not missing, ManifestError, f"{path}: missing columns {missing}")
    return df


def _parse_bool(value: str, path: str, line: int, column: str) -> bool:
    text = value.strip().lower()
    if text in _TRUE:
        return True
    if text in _FALSE:
        return False
    raise ManifestError(f"{path}, line {line}: {column} must be true or false, got {value!r}")


def _row_error(path: str, line: int, error: ValidationError) -> ManifestError:
    first = error.errors()[0]
    field = ".".join(str(p) for p in first["loc"]) or "row"
    return ManifestError(f"{path}, line {line}: {field}: {first['msg']}")


def load_manifest(path: str) -> CorpusManifest:
    """
    Load the corpus manifest; relative text paths resolve against its directory.

    Raises:
        ManifestError: schema violations, naming file and line
    """
    settings = get_config()
    year_min, year_max = int(settings.get("YEAR_MIN", 1900)), int(settings.get("YEAR_MAX", 2100))
    df = _read_csv(path, MANIFEST_COLUMNS)
    base = os.path.dirname(os.path.abspath(path))
    rows = []
    for i, record in enumerate(df.to_dict(orient="records")):
        line = i + 2
        try:
            year = int(record["year"])
        except ValueError:
            raise ManifestError(f"{path}, line {line}: year must be an integer, got {record['year']!r}")
        if not year_min <= year <= year_max:
            raise ManifestError(f"{path}, line {line}: year {year} outside {year_min}-{year_max}")
        alpha = record.get("alpha_override", "").strip()
        text_path = record["text_path"].strip()
        if text_path and not os.path.isabs(text_path):
            text_path = os.path.join(base, text_path)
        try:
            rows.append(ManifestRow(
                paper_id=record["paper_id"].strip(),
                text_path=text_path,
                venue=record["venue"].strip(),
                year=year,
                mcc_used=_parse_bool(record.get("mcc_used", ""), path, line, "mcc_used"),
                effect_sizes=(record.get("effect_sizes", "").strip().lower() or "none"),
                alpha_override=float(alpha) if alpha else None,
            ))
        except ValidationError as e:
            raise _row_error(path, line, e)
        except ValueError:
            raise ManifestError(f"{path}, line {line}: alpha_override must be a number, got {alpha!r}")
    try:
        return CorpusManifest(rows=rows)
    except ValidationError as e:
        raise ManifestError(f"{path}: {e.errors()[0]['msg']}")


def load_ground_truth(path: str) -> List[GroundTruthRow]:
    """
    Raises:
        ManifestError: schema violations, naming file and line
    """
    df = _read_csv(path, TRUTH_COLUMNS)
    rows = []
    for i, record in enumerate(df.to_dict(orient="records")):
        try:
            rows.append(GroundTruthRow(
                paper_id=record["paper_id"].strip(),
                test_index=int(record["test_index"]),
                human_outcome=record["human_outcome"].strip(),
                author_error_code=record.get("author_error_code"),
                tool_error_code=record.get("tool_error_code"),
            ))
        except ValidationError as e:
            raise _row_error(path, i + 2, e)
        except ValueError:
            raise ManifestError(f"{path}, line {i + 2}: test_index must be an integer")
    return rows


def bundle_path(path: str) -> str:
    return os.path.join(path, BUNDLE_FILE) if os.path.isdir(path) else path


def save_bundle(bundle: CorpusBundle, out_dir: str) -> str:
    """Write bundle.json, papers.csv and tests.csv; returns the bundle path."""
    os.makedirs(out_dir, exist_ok=True)
    target = os.path.join(out_dir, BUNDLE_FILE)
    with open(target, "w", encoding="utf-8", newline="\n") as f:
        f.write(bundle.model_dump_json(indent=2))
        f.write("\n")

    papers = pd.DataFrame([{
        "paper_id": p.paper_id, "venue": p.venue, "year": p.year, "mcc_used": p.mcc_used,
        "effect_sizes": p.effect_sizes_reported.value, "outcome": p.outcome.outcome.value,
        "n_complete": p.outcome.n_complete, "n_incomplete": p.outcome.n_incomplete,
        "n_inconsistent": p.outcome.n_inconsistent, "n_decision_errors": p.outcome.n_decision_errors,
    } for p in bundle.papers], columns=["paper_id", "venue", "year", "mcc_used", "effect_sizes", "outcome",
                                        "n_complete", "n_incomplete", "n_inconsistent", "n_decision_errors"])
    papers.to_csv(os.path.join(out_dir, "papers.csv"), index=False, lineterminator="\n")

    tests = pd.DataFrame([t.model_dump(mode="json") for t in bundle.tests],
                         columns=list(TestRecord.model_fields.keys()))
    tests.to_csv(os.path.join(out_dir, "tests.csv"), index=False, lineterminator="\n")
    logger.info(f"Bundle written to {target}")
    return target


def load_bundle(path: str) -> CorpusBundle:
    """Reload a bundle from its JSON file or from the directory holding it."""
    with open(bundle_path(path), "r", encoding="utf-8") as f:
        return CorpusBundle.model_validate_json(f.read())


def load_distribution(path: str) -> Dict[str, int]:
    """
    Paper-outcome counts from a bundle, or from a CSV with columns outcome,count.

    Raises:
        ManifestError: malformed CSV
        EmptyInputError: no papers counted
    """
    if path.lower().endswith(".csv"):
        df = _read_csv(path, ["outcome", "count"])
        counts: Dict[str, int] = {}
        for i, record in enumerate(df.to_dict(orient="records")):
            outcome = record["outcome"].strip()
            if outcome not in OUTCOME_ORDER:
                raise ManifestError(f"{path}, line {i + 2}: unknown outcome {outcome!r}")
            try:
                counts[outcome] = counts.get(outcome, 0) + int(record["count"])
            except ValueError:
                raise ManifestError(f"{path}, line {i + 2}: count must be an integer")
    else:
        counts = load_bundle(path).outcome_counts()
    require(sum(counts.values()) > 0, EmptyInputError, f"{path}: no paper outcomes to compare")
    return counts
