"""SDG query library: native TSV loading, Elsevier import, compilation.

The native format is a UTF-8 TSV, one sub-query per row:

    sdg_id <TAB> subquery_id <TAB> label <TAB> query

Header row required, `#`-prefixed lines are comments, LF line endings.
Two comment directives are recognized and echoed into every
classification output for provenance:

    # name: elsevier-2023
    # version: 1.0

Compilation deduplicates all query atoms into one shared table and builds
a multi-pattern index so a document is scanned once no matter how many
sub-queries the library holds.
"""

from __future__ import annotations

import io
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import TextIO

from . import query_lang
from .engine import SDG_IDS, evaluate_subquery
from .query_lang import Atom, Node, ParseError, Phrase, Prefix, Term
from .text_pipeline import NormalizedDoc, match_atom

NATIVE_HEADER = ("sdg_id", "subquery_id", "label", "query")


@dataclass(frozen=True)
class SubQuery:
    """One Boolean sub-query capturing a thematic aspect of an SDG."""

    subquery_id: str
    sdg_id: int
    label: str
    raw: str
    ast: Node


@dataclass
class QueryLibrary:
    name: str
    version: str
    by_sdg: dict[int, list[SubQuery]]
    warnings: list[str] = field(default_factory=list)

    @property
    def provenance(self) -> str:
        return f"{self.name}@{self.version}"

    def totals(self) -> dict[int, int]:
        return {s: len(self.by_sdg[s]) for s in SDG_IDS}

    def all_subqueries(self) -> list[SubQuery]:
        return [sq for s in SDG_IDS for sq in self.by_sdg[s]]


@dataclass
class LoadIssue:
    line: int
    subquery_id: str
    message: str

    def __str__(self) -> str:
        where = f"line {self.line}"
        if self.subquery_id:
            where += f", sub-query {self.subquery_id!r}"
        return f"{where}: {self.message}"


class LibraryError(Exception):
    """Aggregated load/import failure naming every offending row."""

    def __init__(self, path: str, issues: list[LoadIssue]):
        self.path = path
        self.issues = issues
        lines = "\n".join(f"  {issue}" for issue in issues)
        super().__init__(f"{path}: {len(issues)} error(s)\n{lines}")


def _empty_by_sdg() -> dict[int, list[SubQuery]]:
    return {s: [] for s in SDG_IDS}


def _warn_empty_sdgs(lib: QueryLibrary) -> None:
    for s in SDG_IDS:
        if not lib.by_sdg[s]:
            lib.warnings.append(f"SDG {s} has no sub-queries")


def load_library(path: str | Path) -> QueryLibrary:
    """Parse a native query TSV; raises LibraryError listing every bad row."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8-sig")
    except OSError as exc:
        raise LibraryError(str(path), [LoadIssue(0, "", f"cannot read file: {exc}")])

    name, version = path.stem, "unversioned"
    issues: list[LoadIssue] = []
    by_sdg = _empty_by_sdg()
    seen_ids: dict[str, int] = {}
    header_seen = False

    for lineno, line in enumerate(text.split("\n"), start=1):
        if not line.strip():
            continue
        if line.startswith("#"):
            directive = line.lstrip("#").strip()
            for key in ("name", "version"):
                if directive.lower().startswith(key + ":"):
                    value = directive[len(key) + 1 :].strip()
                    if key == "name":
                        name = value
                    else:
                        version = value
            continue
        cells = line.rstrip("\r").split("\t")
        if not header_seen:
            if tuple(c.strip().lower() for c in cells) != NATIVE_HEADER:
                issues.append(
                    LoadIssue(lineno, "", f"expected header {list(NATIVE_HEADER)}, got {cells}")
                )
                break
            header_seen = True
            continue
        if len(cells) != 4:
            issues.append(LoadIssue(lineno, "", f"expected 4 tab-separated cells, got {len(cells)}"))
            continue
        sdg_text, sq_id, label, raw = (c.strip() for c in cells)
        if not sdg_text.isdigit() or not 1 <= int(sdg_text) <= 17:
            issues.append(LoadIssue(lineno, sq_id, f"sdg-id out of range [1, 17]: {sdg_text!r}"))
            continue
        if not sq_id:
            issues.append(LoadIssue(lineno, "", "empty subquery_id"))
            continue
        if sq_id in seen_ids:
            issues.append(
                LoadIssue(lineno, sq_id, f"duplicate subquery_id (first seen at line {seen_ids[sq_id]})")
            )
            continue
        try:
            ast = query_lang.parse_query(raw)
        except ParseError as exc:
            issues.append(LoadIssue(lineno, sq_id, f"query parse failure: {exc}"))
            continue
        seen_ids[sq_id] = lineno
        by_sdg[int(sdg_text)].append(SubQuery(sq_id, int(sdg_text), label, raw, ast))

    if not header_seen and not issues:
        issues.append(LoadIssue(0, "", "missing header row"))
    if issues:
        raise LibraryError(str(path), issues)

    lib = QueryLibrary(name=name, version=version, by_sdg=by_sdg)
    _warn_empty_sdgs(lib)
    return lib


def save_library(lib: QueryLibrary, path: str | Path) -> None:
    """Serialize a library to the native TSV format (LF endings, UTF-8)."""
    out = io.StringIO()
    out.write(f"# name: {lib.name}\n")
    out.write(f"# version: {lib.version}\n")
    out.write("\t".join(NATIVE_HEADER) + "\n")
    for sq in lib.all_subqueries():
        label = re.sub(r"[\t\r\n]+", " ", sq.label)
        raw = re.sub(r"[\t\r\n]+", " ", sq.raw)
        out.write(f"{sq.sdg_id}\t{sq.subquery_id}\t{label}\t{raw}\n")
    Path(path).write_text(out.getvalue(), encoding="utf-8", newline="\n")


# --- Elsevier 2023 dataset import -----------------------------------------

# Scopus field scopes are flattened: the engine searches one consolidated
# text, so TITLE-ABS-KEY(...) and friends reduce to their inner expression.
_FIELD_SCOPE_RE = re.compile(
    r"\b(?:TITLE-ABS-KEY|TITLE-ABS|TITLE|ABS|AUTHKEY|INDEXTERMS|KEY|SRCTITLE|ALL)\s*\(",
    re.IGNORECASE,
)
_PROXIMITY_RE = re.compile(r"\b(?:W|PRE)\s*/\s*\d+\b", re.IGNORECASE)
_SMART_QUOTES = {"“": '"', "”": '"', "‘": "'", "’": "'"}


@dataclass
class RowDisposition:
    subquery_id: str
    sdg_id: int
    construct: str
    disposition: str  # REJECTED | REWRITTEN-AS-AND | FLATTENED-SCOPE
    detail: str = ""


@dataclass
class ImportReport:
    source: str
    columns: dict[str, str] = field(default_factory=dict)
    total_rows: int = 0
    imported_per_sdg: dict[int, int] = field(default_factory=lambda: {s: 0 for s in SDG_IDS})
    operator_usage: dict[str, int] = field(default_factory=dict)
    rejected: list[RowDisposition] = field(default_factory=list)
    rewritten: list[RowDisposition] = field(default_factory=list)

    def render(self) -> str:
        lines = [
            f"Import report for {self.source}",
            f"columns: {self.columns}",
            f"rows read: {self.total_rows}",
            f"imported: {sum(self.imported_per_sdg.values())}  rejected: {len(self.rejected)}",
            "per-SDG imported counts:",
        ]
        for s in SDG_IDS:
            lines.append(f"  SDG {s:>2}: {self.imported_per_sdg[s]}")
        lines.append("operator usage:")
        for op in sorted(self.operator_usage):
            lines.append(f"  {op}: {self.operator_usage[op]}")
        if self.rewritten:
            lines.append("rewritten constructs:")
            for d in self.rewritten:
                lines.append(f"  {d.subquery_id}: {d.construct} -> {d.disposition} {d.detail}")
        if self.rejected:
            lines.append("rejected rows:")
            for d in self.rejected:
                detail = f" ({d.detail})" if d.detail else ""
                lines.append(f"  {d.subquery_id}: {d.construct} -> REJECTED{detail}")
        return "\n".join(lines) + "\n"


def _find_column(
    headers: list[str],
    *needles: str,
    taken: set[str] = frozenset(),
    exclude: str | None = None,
) -> str | None:
    for h in headers:  # exact name wins over substring
        if h not in taken and h.strip().lower() in needles:
            return h
    for h in headers:
        low = h.lower()
        if h in taken or (exclude and re.search(exclude, low)):
            continue
        if any(n in low for n in needles):
            return h
    return None


def _count_operators(raw: str, report: ImportReport) -> None:
    try:
        lexemes = query_lang.tokenize_query(raw)
    except ParseError:
        return
    usage = report.operator_usage
    for lex in lexemes:
        if lex.kind in query_lang.OPERATORS:
            usage[lex.kind] = usage.get(lex.kind, 0) + 1
        elif lex.kind == "WORD" and lex.text.endswith("*"):
            usage["WILDCARD"] = usage.get("WILDCARD", 0) + 1
        elif lex.kind == "QUOTED":
            usage["PHRASE"] = usage.get("PHRASE", 0) + 1


def import_elsevier(
    source: str | Path,
    report_sink: TextIO | None = None,
    rewrite_proximity_as_and: bool = False,
) -> tuple[QueryLibrary, ImportReport]:
    """Convert the Elsevier 2023 SDG mapping file into a native library.

    The upstream column layout is discovered at runtime: the first column
    whose name mentions "sdg" or "goal" supplies the SDG id, the first
    mentioning "quer" the query string.  Proximity operators (W/n, PRE/n)
    are rejected unless `rewrite_proximity_as_and` accepts the weaker AND
    semantics.  Every rejected or rewritten construct lands in the report.
    """
    source = Path(source)
    if source.suffix.lower() in (".xlsx", ".xls"):
        raise LibraryError(
            str(source),
            [LoadIssue(0, "", "spreadsheet input not supported; export the sheet as CSV first")],
        )
    try:
        text = source.read_text(encoding="utf-8-sig")
    except OSError as exc:
        raise LibraryError(str(source), [LoadIssue(0, "", f"cannot read file: {exc}")])

    import csv as _csv

    delimiter = "\t" if source.suffix.lower() in (".tsv", ".txt") else ","
    rows = list(_csv.reader(io.StringIO(text), delimiter=delimiter))
    rows = [r for r in rows if any(cell.strip() for cell in r)]
    report = ImportReport(source=str(source))
    if not rows:
        lib = QueryLibrary(name=source.stem, version="imported", by_sdg=_empty_by_sdg())
        _warn_empty_sdgs(lib)
        if report_sink:
            report_sink.write(report.render())
        return lib, report

    headers = [h.strip() for h in rows[0]]
    sdg_col = _find_column(headers, "sdg", "goal")
    query_col = _find_column(
        headers, "query", "quer", taken={sdg_col} if sdg_col else set(), exclude=r"\bid\b"
    )
    if sdg_col is None or query_col is None:
        raise LibraryError(
            str(source),
            [LoadIssue(1, "", f"unrecognized schema; observed columns: {headers}")],
        )
    taken = {sdg_col, query_col}
    id_col = _find_column(headers, "id", taken=taken)
    if id_col:
        taken.add(id_col)
    label_col = _find_column(headers, "label", "name", "aspect", "topic", "keyword", taken=taken)
    report.columns = {
        "sdg": sdg_col,
        "query": query_col,
        "id": id_col or "(generated)",
        "label": label_col or "(none)",
    }
    col_index = {h: i for i, h in enumerate(headers)}

    by_sdg = _empty_by_sdg()
    seen_ids: set[str] = set()
    seq = 0
    for row in rows[1:]:
        report.total_rows += 1

        def cell(col: str | None) -> str:
            if col is None or col_index[col] >= len(row):
                return ""
            return row[col_index[col]].strip()

        sdg_match = re.search(r"\d+", cell(sdg_col))
        sdg_id = int(sdg_match.group()) if sdg_match else 0
        seq += 1
        sq_id = cell(id_col) or f"sdg{sdg_id}.{seq}"
        if sq_id in seen_ids:
            sq_id = f"{sq_id}.{seq}"
        if not 1 <= sdg_id <= 17:
            report.rejected.append(
                RowDisposition(sq_id, sdg_id, "sdg-id", "REJECTED", f"out of range: {cell(sdg_col)!r}")
            )
            continue

        raw = cell(query_col)
        if not raw:
            report.rejected.append(RowDisposition(sq_id, sdg_id, "empty query", "REJECTED"))
            continue
        for smart, plain in _SMART_QUOTES.items():
            raw = raw.replace(smart, plain)
        raw = raw.replace("{", '"').replace("}", '"')
        if _FIELD_SCOPE_RE.search(raw):
            raw = _FIELD_SCOPE_RE.sub("(", raw)
            report.rewritten.append(
                RowDisposition(sq_id, sdg_id, "field scope", "FLATTENED-SCOPE")
            )
        prox = _PROXIMITY_RE.findall(raw)
        if prox:
            if rewrite_proximity_as_and:
                raw = _PROXIMITY_RE.sub("AND", raw)
                report.rewritten.append(
                    RowDisposition(sq_id, sdg_id, ", ".join(prox), "REWRITTEN-AS-AND")
                )
            else:
                report.rejected.append(
                    RowDisposition(sq_id, sdg_id, ", ".join(prox), "REJECTED", "proximity operator")
                )
                continue
        _count_operators(raw, report)
        try:
            ast = query_lang.parse_query(raw)
        except ParseError as exc:
            report.rejected.append(RowDisposition(sq_id, sdg_id, "parse failure", "REJECTED", str(exc)))
            continue
        seen_ids.add(sq_id)
        by_sdg[sdg_id].append(SubQuery(sq_id, sdg_id, cell(label_col), raw, ast))
        report.imported_per_sdg[sdg_id] += 1

    lib = QueryLibrary(name=source.stem, version="imported", by_sdg=by_sdg)
    _warn_empty_sdgs(lib)
    if report_sink:
        report_sink.write(report.render())
    return lib, report


# --- compilation -----------------------------------------------------------


@dataclass(frozen=True)
class CompiledSubQuery:
    subquery_id: str
    sdg_id: int
    tree: tuple
    atom_ids: frozenset[int]


@dataclass
class CompiledLibrary:
    """Immutable compiled form: shared atom table plus multi-pattern index.

    Safe to share read-only across any number of workers.
    """

    library: QueryLibrary
    atoms: list[Atom]
    atom_ids: dict[Atom, int]
    compiled: list[CompiledSubQuery]
    indices_by_sdg: dict[int, list[int]]
    subqueries_with_atom: list[list[int]]
    empty_set_results: list[bool]
    word_atoms: dict[str, int]
    stem_atoms: dict[str, int]
    stem_lengths: list[int]
    phrase_atoms: list[tuple[int, Phrase]]

    def satisfied_atoms(self, doc: NormalizedDoc) -> set[int]:
        """One scan over the document vocabulary; phrases verified positionally."""
        satisfied: set[int] = set()
        word_atoms = self.word_atoms
        stem_atoms = self.stem_atoms
        stem_lengths = self.stem_lengths
        for tok in doc.positions:
            aid = word_atoms.get(tok)
            if aid is not None:
                satisfied.add(aid)
            for plen in stem_lengths:
                if plen > len(tok):
                    break
                aid = stem_atoms.get(tok[:plen])
                if aid is not None:
                    satisfied.add(aid)
        for aid, phrase in self.phrase_atoms:
            if all(
                doc.has_prefix(w.text) if w.prefix else doc.has_token(w.text)
                for w in phrase.words
            ) and match_atom(doc, phrase):
                satisfied.add(aid)
        return satisfied


def _compile_node(node: Node, atom_ids: dict[Atom, int]) -> tuple:
    if isinstance(node, (Term, Prefix, Phrase)):
        return ("atom", atom_ids[node])
    if isinstance(node, query_lang.Not):
        return ("not", _compile_node(node.child, atom_ids))
    children = tuple(_compile_node(c, atom_ids) for c in node.children)
    return ("and" if isinstance(node, query_lang.And) else "or", children)


def compile_library(lib: QueryLibrary) -> CompiledLibrary:
    """Build the deduplicated atom table and multi-pattern index.

    Deterministic: atom ids follow first occurrence over SDGs 1..17 in
    file order, so identical libraries always compile identically.
    """
    atom_ids: dict[Atom, int] = {}
    atoms: list[Atom] = []
    compiled: list[CompiledSubQuery] = []
    indices_by_sdg: dict[int, list[int]] = {s: [] for s in SDG_IDS}

    for sq in lib.all_subqueries():
        for _, atom in query_lang.ast_terms(sq.ast):
            if atom not in atom_ids:
                atom_ids[atom] = len(atoms)
                atoms.append(atom)
        tree = _compile_node(sq.ast, atom_ids)
        ids = frozenset(atom_ids[a] for _, a in query_lang.ast_terms(sq.ast))
        indices_by_sdg[sq.sdg_id].append(len(compiled))
        compiled.append(CompiledSubQuery(sq.subquery_id, sq.sdg_id, tree, ids))

    subqueries_with_atom: list[list[int]] = [[] for _ in atoms]
    for idx, csq in enumerate(compiled):
        for aid in sorted(csq.atom_ids):
            subqueries_with_atom[aid].append(idx)
    empty_set_results = [evaluate_subquery(c.tree, frozenset()) for c in compiled]

    word_atoms: dict[str, int] = {}
    stem_atoms: dict[str, int] = {}
    phrase_atoms: list[tuple[int, Phrase]] = []
    for aid, atom in enumerate(atoms):
        if isinstance(atom, Term):
            word_atoms[atom.word] = aid
        elif isinstance(atom, Prefix):
            stem_atoms[atom.stem] = aid
        else:
            phrase_atoms.append((aid, atom))
    stem_lengths = sorted({len(s) for s in stem_atoms})

    return CompiledLibrary(
        library=lib,
        atoms=atoms,
        atom_ids=atom_ids,
        compiled=compiled,
        indices_by_sdg=indices_by_sdg,
        subqueries_with_atom=subqueries_with_atom,
        empty_set_results=empty_set_results,
        word_atoms=word_atoms,
        stem_atoms=stem_atoms,
        stem_lengths=stem_lengths,
        phrase_atoms=phrase_atoms,
    )
