"""Bibliographic file ingestion: Scopus/WoS-style CSV and TSV exports.

Columns are auto-detected with overridable header heuristics; each record
is consolidated into one classification-ready text (title, abstract,
author keywords, index keywords, in that order).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

ROLES = ("title", "abstract", "author_keywords", "index_keywords")

# exact header names (case-insensitive) tried before substring matching
_EXACT_NAMES = {
    "title": "title",
    "abstract": "abstract",
    "author_keywords": "author keywords",
    "index_keywords": "index keywords",
}
_SUBSTRINGS = {
    "title": "title",
    "abstract": "abstract",
    "author_keywords": "author keyword",
    "index_keywords": "index keyword",
}
# Scopus exports carry "Source title" / "Conference name" columns that must
# not shadow the paper title
_TITLE_EXCLUDES = ("source", "conference")


class IngestError(Exception):
    """Unreadable file, missing header, bad mapping or malformed quoting."""


@dataclass
class ColumnMapping:
    """Binding of the four metadata roles to source columns.

    `columns[role]` is a header name or None; `provenance[role]` records
    whether the binding was detected (auto) or user-supplied (manual).
    """

    columns: dict[str, str | None]
    provenance: dict[str, str]

    @classmethod
    def manual(cls, assignments: dict[str, str]) -> "ColumnMapping":
        unknown = set(assignments) - set(ROLES)
        if unknown:
            raise IngestError(f"unknown mapping role(s): {sorted(unknown)}; valid roles: {list(ROLES)}")
        bound = [c for c in assignments.values() if c]
        if len(bound) != len(set(bound)):
            raise IngestError(f"a column cannot be mapped to two roles: {assignments}")
        columns = {role: assignments.get(role) for role in ROLES}
        provenance = {role: "manual" if assignments.get(role) else "none" for role in ROLES}
        return cls(columns, provenance)


def detect_columns(header: list[str]) -> ColumnMapping:
    """Auto-detect role columns; pure function of the header list.

    Per role, case-insensitive priority: exact role name first, then
    substring on the role keyword; for "title", columns also mentioning
    "source" or "conference" are skipped.  First qualifying column in
    header order wins; a column is never bound to two roles.
    """
    columns: dict[str, str | None] = {role: None for role in ROLES}
    claimed: set[str] = set()
    for role in ROLES:
        for col in header:
            if col in claimed:
                continue
            if col.strip().lower() == _EXACT_NAMES[role]:
                columns[role] = col
                claimed.add(col)
                break
    for role in ROLES:
        if columns[role] is not None:
            continue
        needle = _SUBSTRINGS[role]
        for col in header:
            if col in claimed:
                continue
            low = col.strip().lower()
            if needle not in low:
                continue
            if role == "title" and any(x in low for x in _TITLE_EXCLUDES):
                continue
            columns[role] = col
            claimed.add(col)
            break
    provenance = {role: "auto" if columns[role] else "none" for role in ROLES}
    return ColumnMapping(columns, provenance)


@dataclass
class PaperRecord:
    """One bibliographic row; role fields plus lossless passthrough."""

    row_index: int
    title: str
    abstract: str
    author_keywords: str
    index_keywords: str
    extra: dict[str, str]
    source_file: str
    classifiable: bool

    def role_value(self, role: str) -> str:
        return getattr(self, role)


@dataclass
class BatchDiagnostics:
    path: str
    header: list[str]
    mapping: ColumnMapping
    row_count: int
    unclassifiable_rows: list[int] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


def _sniff_delimiter(path: Path, fmt: str | None) -> str:
    if fmt:
        if fmt not in ("csv", "tsv"):
            raise IngestError(f"unknown format {fmt!r}; expected csv or tsv")
        return "\t" if fmt == "tsv" else ","
    return "\t" if path.suffix.lower() in (".tsv", ".tab") else ","


def read_batch(
    path: str | Path,
    mapping: ColumnMapping | None = None,
    fmt: str | None = None,
    start_index: int = 0,
) -> tuple[list[PaperRecord], BatchDiagnostics]:
    """Read one CSV/TSV export into PaperRecords, in input row order.

    `mapping=None` auto-detects columns.  Rows where all four mapped
    fields are empty are kept but flagged unclassifiable.
    """
    path = Path(path)
    try:
        with open(path, encoding="utf-8-sig", newline="") as fh:
            text = fh.read()
    except OSError as exc:
        raise IngestError(f"{path}: cannot read file: {exc}")
    return parse_batch_text(text, str(path), _sniff_delimiter(path, fmt), mapping, start_index)


def parse_batch_text(
    text: str,
    source_name: str,
    delimiter: str = ",",
    mapping: ColumnMapping | None = None,
    start_index: int = 0,
) -> tuple[list[PaperRecord], BatchDiagnostics]:
    reader = csv.reader(io.StringIO(text, newline=""), delimiter=delimiter, strict=True)
    try:
        rows = list(reader)
    except csv.Error as exc:
        raise IngestError(f"{source_name}: malformed quoting at row {reader.line_num}: {exc}")
    rows = [r for r in rows if any(cell.strip() for cell in r)]
    if not rows:
        raise IngestError(f"{source_name}: header row missing (file is empty)")

    header = [h.strip() for h in rows[0]]
    warnings: list[str] = []
    seen: set[str] = set()
    for col in header:
        if col in seen:
            warnings.append(f"duplicate column {col!r}: first occurrence bound, later ones ignored")
        seen.add(col)

    if mapping is None:
        mapping = detect_columns(header)
    else:
        missing = [c for c in mapping.columns.values() if c is not None and c not in header]
        if missing:
            raise IngestError(f"{source_name}: mapped column(s) not in header: {missing}")

    col_pos = {}
    for i, col in enumerate(header):
        col_pos.setdefault(col, i)  # first occurrence binds
    role_cols = {role: mapping.columns[role] for role in ROLES}
    role_col_set = {c for c in role_cols.values() if c is not None}

    records: list[PaperRecord] = []
    diag = BatchDiagnostics(path=source_name, header=header, mapping=mapping, row_count=0, warnings=warnings)
    for offset, cells in enumerate(rows[1:]):
        if len(cells) > len(header):
            warnings.append(f"row {offset + 2}: {len(cells)} cells but {len(header)} columns; extras ignored")

        def cell(col: str | None) -> str:
            if col is None:
                return ""
            pos = col_pos[col]
            return cells[pos] if pos < len(cells) else ""

        fields = {role: cell(role_cols[role]) for role in ROLES}
        extra = {
            col: (cells[pos] if pos < len(cells) else "")
            for col, pos in col_pos.items()
            if col not in role_col_set
        }
        classifiable = any(v.strip() for v in fields.values())
        index = start_index + offset
        if not classifiable:
            diag.unclassifiable_rows.append(index)
            warnings.append(f"row {offset + 2}: all mapped metadata fields empty; record unclassifiable")
        records.append(
            PaperRecord(
                row_index=index,
                source_file=source_name,
                extra=extra,
                classifiable=classifiable,
                **fields,
            )
        )
    diag.row_count = len(records)
    return records, diag


def read_many(
    paths: list[str | Path],
    mapping: ColumnMapping | None = None,
    fmt: str | None = None,
) -> tuple[list[PaperRecord], list[BatchDiagnostics]]:
    """Concatenate several exports in upload order; row indices run globally."""
    records: list[PaperRecord] = []
    diags: list[BatchDiagnostics] = []
    for path in paths:
        file_records, diag = read_batch(path, mapping=mapping, fmt=fmt, start_index=len(records))
        records.extend(file_records)
        diags.append(diag)
    return records, diags


def consolidate(record: PaperRecord) -> str:
    """Concatenate the available metadata fields into one text."""
    parts = [record.role_value(role) for role in ROLES]
    return " ".join(p for p in parts if p)
