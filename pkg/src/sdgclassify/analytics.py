"""Corpus-level summaries and the ground-truth evaluation harness.

A prediction is correct at level k when the ground-truth SDG appears in
the top-k returned SDGs.  The eval table mirrors the usual accuracy@Top-N
report layout: per-SDG correct@1..k, no-recognition count, and accuracy
percentages at 1, 2 and k.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

from .engine import SDG_IDS, ClassificationResult
from .ingestion import PaperRecord


@dataclass
class CorpusSummary:
    """Per-SDG frequency at each rank and cumulative Top-k counts."""

    top_n: int
    total: int
    no_recognition: int
    rank_counts: dict[int, list[int]]  # sdg -> count at rank position 1..top_n
    cumulative: dict[int, list[int]]  # sdg -> count within top-1..top-n


def summarize(results: list[ClassificationResult]) -> CorpusSummary:
    """Count SDG occurrences at each rank position across a result list."""
    if not results:
        raise ValueError("cannot summarize an empty result list")
    top_n = max(r.top_n for r in results)
    rank_counts = {s: [0] * top_n for s in SDG_IDS}
    for r in results:
        for pos, entry in enumerate(r.entries):
            rank_counts[entry.sdg_id][pos] += 1
    cumulative = {}
    for s in SDG_IDS:
        running = 0
        cumulative[s] = [running := running + c for c in rank_counts[s]]
    return CorpusSummary(
        top_n=top_n,
        total=len(results),
        no_recognition=sum(1 for r in results if r.no_recognition),
        rank_counts=rank_counts,
        cumulative=cumulative,
    )


@dataclass
class EvalRow:
    label: str
    total: int
    correct_at: list[int]  # index k-1 -> correct@k
    no_recognition: int

    def accuracy(self, k: int) -> float:
        if self.total == 0:
            return 0.0
        return 100.0 * self.correct_at[k - 1] / self.total


@dataclass
class EvalTable:
    k_max: int
    rows: list[EvalRow] = field(default_factory=list)  # per-SDG rows, then Overall

    @property
    def overall(self) -> EvalRow:
        return self.rows[-1]


def evaluate(
    results: list[ClassificationResult],
    truth: dict[int, int],
    k_max: int = 5,
) -> EvalTable:
    """Score results against ground-truth labels at every level up to k_max."""
    if not 1 <= k_max <= 17:
        raise ValueError(f"k_max must be in [1, 17], got {k_max}")
    for row in truth:
        if not 0 <= row < len(results):
            raise ValueError(f"truth references unknown row {row}")
        if results[row].top_n < k_max:
            raise ValueError(
                f"results truncated below k_max: row {row} ranked with top_n={results[row].top_n} < {k_max}"
            )

    per_sdg: dict[int, EvalRow] = {}
    for row, sdg in sorted(truth.items()):
        er = per_sdg.setdefault(sdg, EvalRow(f"SDG {sdg}", 0, [0] * k_max, 0))
        er.total += 1
        result = results[row]
        ranked = [e.sdg_id for e in result.entries]
        position = ranked.index(sdg) + 1 if sdg in ranked else None
        if position is not None:
            for k in range(position, k_max + 1):
                er.correct_at[k - 1] += 1
        if result.no_recognition:
            er.no_recognition += 1

    rows = [per_sdg[s] for s in sorted(per_sdg)]
    overall = EvalRow(
        "Overall",
        sum(r.total for r in rows),
        [sum(r.correct_at[k] for r in rows) for k in range(k_max)],
        sum(r.no_recognition for r in rows),
    )
    rows.append(overall)
    return EvalTable(k_max=k_max, rows=rows)


def load_truth(path: str | Path, records: list[PaperRecord] | None = None) -> dict[int, int]:
    """Read a ground-truth CSV: `row_index,sdg_id`, or a named id column
    matching a passthrough column when `records` are given."""
    path = Path(path)
    with open(path, encoding="utf-8-sig", newline="") as fh:
        reader = csv.DictReader(fh)
        rows = list(reader)
        fieldnames = reader.fieldnames or []
    if "sdg_id" not in fieldnames:
        raise ValueError(f"{path}: truth file needs an sdg_id column; found {fieldnames}")
    if "row_index" in fieldnames:
        return {int(r["row_index"]): int(r["sdg_id"]) for r in rows}
    id_cols = [c for c in fieldnames if c != "sdg_id"]
    if len(id_cols) != 1 or records is None:
        raise ValueError(f"{path}: expected columns row_index,sdg_id (or one id column); found {fieldnames}")
    id_col = id_cols[0]
    by_value: dict[str, int] = {}
    for rec in records:
        value = rec.extra.get(id_col, "")
        if value:
            by_value.setdefault(value, rec.row_index)
    truth = {}
    for r in rows:
        if r[id_col] not in by_value:
            raise ValueError(f"{path}: id {r[id_col]!r} not found in column {id_col!r}")
        truth[by_value[r[id_col]]] = int(r["sdg_id"])
    return truth


def _fmt_pct(value: float) -> str:
    return f"{value:.2f}".rstrip("0").rstrip(".")


def render_summary_csv(summary: CorpusSummary) -> str:
    """Stable summary CSV: sdg_id,rank1_count,top2_count,...,topN_count."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    header = ["sdg_id", "rank1_count"] + [f"top{k}_count" for k in range(2, summary.top_n + 1)]
    writer.writerow(header)
    for s in SDG_IDS:
        writer.writerow([s] + summary.cumulative[s])
    return out.getvalue()


def render_summary_text(summary: CorpusSummary) -> str:
    lines = [
        f"papers: {summary.total}",
        f"no recognition: {summary.no_recognition}",
        f"top_n: {summary.top_n}",
        "sdg  " + "  ".join(f"top{k:<2}" for k in range(1, summary.top_n + 1)),
    ]
    for s in SDG_IDS:
        counts = "  ".join(f"{c:<5}" for c in summary.cumulative[s])
        lines.append(f"{s:>3}  {counts}")
    return "\n".join(lines) + "\n"


def render_eval_csv(table: EvalTable) -> str:
    """Eval CSV mirroring the accuracy@Top-N table layout."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    acc_levels = [k for k in (1, 2, table.k_max) if k <= table.k_max]
    acc_levels = sorted(set(acc_levels))
    header = (
        ["SDG", "Total Papers"]
        + [f"Correct @ Top-{k}" for k in range(1, table.k_max + 1)]
        + ["No Recognition"]
        + [f"Accuracy @ Top-{k} (%)" for k in acc_levels]
    )
    writer.writerow(header)
    for row in table.rows:
        writer.writerow(
            [row.label, row.total]
            + row.correct_at
            + [row.no_recognition]
            + [_fmt_pct(row.accuracy(k)) for k in acc_levels]
        )
    return out.getvalue()


def render_eval_text(table: EvalTable) -> str:
    csv_text = render_eval_csv(table)
    rows = list(csv.reader(io.StringIO(csv_text)))
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = ["  ".join(cell.ljust(widths[i]) for i, cell in enumerate(r)).rstrip() for r in rows]
    return "\n".join(lines) + "\n"


def export_summary(obj: CorpusSummary | EvalTable, path: str | Path, fmt: str = "csv") -> None:
    """Write a summary or eval table; deterministic, never an empty file."""
    if isinstance(obj, CorpusSummary):
        if obj.total == 0:
            raise ValueError("refusing to export an empty summary")
        text = render_summary_csv(obj) if fmt == "csv" else render_summary_text(obj)
    elif isinstance(obj, EvalTable):
        if not obj.rows or obj.overall.total == 0:
            raise ValueError("refusing to export an empty eval table")
        text = render_eval_csv(obj) if fmt == "csv" else render_eval_text(obj)
    else:
        raise TypeError(f"cannot export {type(obj).__name__}")
    if fmt not in ("csv", "text"):
        raise ValueError(f"unknown export format {fmt!r}")
    Path(path).write_text(text, encoding="utf-8", newline="\n")
