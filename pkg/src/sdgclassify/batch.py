"""Batch classification: record fan-out across workers and result writers.

Classification is embarrassingly parallel; records are fanned out per
worker and collected back in input order, so output is byte-identical for
any worker count.
"""

from __future__ import annotations

import csv
import io
import json
import multiprocessing
from fractions import Fraction

from .engine import SDG_NAMES, ClassificationResult, classify, rank
from .ingestion import BatchDiagnostics, PaperRecord, consolidate
from .library import CompiledLibrary
from .text_pipeline import normalize


def classify_text(text: str, lib: CompiledLibrary, top_n: int) -> ClassificationResult:
    """Normalize, classify and rank one consolidated text."""
    return rank(classify(normalize(text), lib), top_n)


_worker_lib: CompiledLibrary | None = None
_worker_top_n = 3


def _init_worker(lib: CompiledLibrary, top_n: int) -> None:
    global _worker_lib, _worker_top_n
    _worker_lib = lib
    _worker_top_n = top_n


def _classify_one(text: str) -> ClassificationResult:
    return classify_text(text, _worker_lib, _worker_top_n)


def classify_records(
    records: list[PaperRecord],
    lib: CompiledLibrary,
    top_n: int = 3,
    workers: int = 1,
) -> list[ClassificationResult]:
    """Classify records in input order; same output for any worker count."""
    texts = [consolidate(r) for r in records]
    if workers <= 1 or len(texts) < 2 * workers:
        return [classify_text(t, lib, top_n) for t in texts]
    chunksize = max(1, len(texts) // (workers * 4))
    with multiprocessing.Pool(workers, initializer=_init_worker, initargs=(lib, top_n)) as pool:
        return pool.map(_classify_one, texts, chunksize=chunksize)


def format_score(score: Fraction) -> str:
    return f"{float(score):.6f}".rstrip("0").rstrip(".")


def output_columns(diagnostics: list[BatchDiagnostics]) -> list[str]:
    """Union of input headers in first-seen order."""
    columns: list[str] = []
    seen: set[str] = set()
    for diag in diagnostics:
        for col in diag.header:
            if col not in seen:
                seen.add(col)
                columns.append(col)
    return columns


def render_results_csv(
    records: list[PaperRecord],
    results: list[ClassificationResult],
    diagnostics: list[BatchDiagnostics],
    top_n: int,
) -> str:
    """Augmented CSV: input columns preserved, SDG columns appended."""
    columns = output_columns(diagnostics)
    role_by_file: dict[str, dict[str, str]] = {}
    for diag in diagnostics:
        role_by_file[diag.path] = {
            col: role for role, col in diag.mapping.columns.items() if col is not None
        }
    appended = (
        [f"sdg_top_{k}" for k in range(1, top_n + 1)]
        + [f"sdg_score_{k}" for k in range(1, top_n + 1)]
        + [f"sdg_matched_subqueries_{k}" for k in range(1, top_n + 1)]
        + ["sdg_no_recognition"]
    )
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(columns + appended)
    for record, result in zip(records, results):
        roles = role_by_file.get(record.source_file, {})
        cells = []
        for col in columns:
            if col in roles:
                cells.append(record.role_value(roles[col]))
            else:
                cells.append(record.extra.get(col, ""))
        entries = list(result.entries[:top_n])
        pad = top_n - len(entries)
        cells += [str(e.sdg_id) for e in entries] + [""] * pad
        cells += [format_score(e.score) for e in entries] + [""] * pad
        cells += [";".join(e.matched_subqueries) for e in entries] + [""] * pad
        cells.append("true" if result.no_recognition else "false")
        writer.writerow(cells)
    return out.getvalue()


def result_to_dict(result: ClassificationResult, row_index: int | None = None) -> dict:
    """Stable JSON shape shared by the CLI jsonl output and the HTTP API."""
    payload: dict = {
        "no_recognition": result.no_recognition,
        "top_n": result.top_n,
        "library": result.library_version,
        "entries": [
            {
                "sdg_id": e.sdg_id,
                "sdg_name": SDG_NAMES[e.sdg_id],
                "score": float(e.score),
                "confidence": float(e.score),  # alias: confidence IS the normalized score
                "matched": e.matched,
                "total": e.total,
                "matched_subqueries": list(e.matched_subqueries),
            }
            for e in result.entries
        ],
    }
    if row_index is not None:
        payload = {"row_index": row_index, **payload}
    return payload


def render_results_jsonl(results: list[ClassificationResult]) -> str:
    lines = [
        json.dumps(result_to_dict(r, row_index=i), ensure_ascii=False, sort_keys=False)
        for i, r in enumerate(results)
    ]
    return "\n".join(lines) + "\n"
