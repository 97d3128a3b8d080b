"""Classification engine: evaluate every sub-query in one pass, score, rank.

Per SDG the engine reports Matched (sub-queries satisfied by the document)
and Total (sub-queries defined), with score = Matched / Total kept as an
exact rational.  Ranking is deterministic: score desc, then matched desc,
then sdg id asc.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .library import CompiledLibrary
    from .text_pipeline import NormalizedDoc

SDG_IDS = range(1, 18)

SDG_NAMES = {
    1: "No Poverty",
    2: "Zero Hunger",
    3: "Good Health and Well-being",
    4: "Quality Education",
    5: "Gender Equality",
    6: "Clean Water and Sanitation",
    7: "Affordable and Clean Energy",
    8: "Decent Work and Economic Growth",
    9: "Industry, Innovation and Infrastructure",
    10: "Reduced Inequalities",
    11: "Sustainable Cities and Communities",
    12: "Responsible Consumption and Production",
    13: "Climate Action",
    14: "Life Below Water",
    15: "Life on Land",
    16: "Peace, Justice and Strong Institutions",
    17: "Partnerships for the Goals",
}


@dataclass(frozen=True)
class SdgMatch:
    """Match statistics for one SDG against one document."""

    sdg_id: int
    matched: int
    total: int
    score: Fraction
    matched_subqueries: tuple[str, ...]


@dataclass(frozen=True)
class MatchReport:
    """Per-SDG matched/total/score for one document, before ranking."""

    by_sdg: dict[int, SdgMatch]
    library_version: str


@dataclass(frozen=True)
class ClassificationResult:
    """Ranked, Top-N-truncated SDG assignments for one document."""

    entries: tuple[SdgMatch, ...]
    no_recognition: bool
    library_version: str
    top_n: int


def evaluate_subquery(tree, satisfied: frozenset | set) -> bool:
    """Standard Boolean semantics over a compiled expression tree.

    Trees are nested tuples: ("atom", id), ("and", children),
    ("or", children), ("not", child).
    """
    op = tree[0]
    if op == "atom":
        return tree[1] in satisfied
    if op == "and":
        return all(evaluate_subquery(c, satisfied) for c in tree[1])
    if op == "or":
        return any(evaluate_subquery(c, satisfied) for c in tree[1])
    if op == "not":
        return not evaluate_subquery(tree[1], satisfied)
    raise ValueError(f"bad compiled node: {tree[0]!r}")


def classify(doc: "NormalizedDoc", lib: "CompiledLibrary") -> MatchReport:
    """Classify one document against every sub-query of every SDG.

    One scan of the document yields the satisfied-atom set; each compiled
    sub-query is then a pure Boolean evaluation over that set.  Sub-queries
    sharing no atom with the document reuse their precomputed empty-set
    value instead of being re-evaluated.
    """
    satisfied = lib.satisfied_atoms(doc)
    touched: set[int] = set()
    for aid in satisfied:
        touched.update(lib.subqueries_with_atom[aid])

    matched_flags = list(lib.empty_set_results)
    for idx in touched:
        matched_flags[idx] = evaluate_subquery(lib.compiled[idx].tree, satisfied)

    by_sdg: dict[int, SdgMatch] = {}
    for sdg_id in SDG_IDS:
        indices = lib.indices_by_sdg[sdg_id]
        ids = tuple(lib.compiled[i].subquery_id for i in indices if matched_flags[i])
        total = len(indices)
        matched = len(ids)
        score = Fraction(matched, total) if total else Fraction(0)
        by_sdg[sdg_id] = SdgMatch(sdg_id, matched, total, score, ids)
    return MatchReport(by_sdg=by_sdg, library_version=lib.library.provenance)


def rank(report: MatchReport, top_n: int = 3) -> ClassificationResult:
    """Rank SDGs with score > 0 and truncate to the top N.

    Zero-score SDGs are never returned; when nothing scores above zero the
    result is empty and flagged no_recognition.
    """
    if not 1 <= top_n <= 17:
        raise ValueError(f"top_n must be in [1, 17], got {top_n}")
    scored = [m for m in report.by_sdg.values() if m.score > 0]
    scored.sort(key=lambda m: (-m.score, -m.matched, m.sdg_id))
    return ClassificationResult(
        entries=tuple(scored[:top_n]),
        no_recognition=not scored,
        library_version=report.library_version,
        top_n=top_n,
    )
