"""Rule-based SDG classification of research papers via Boolean query matching."""

__version__ = "0.1.0"

from .engine import ClassificationResult, MatchReport, SdgMatch, classify, rank
from .ingestion import PaperRecord, consolidate, detect_columns, read_batch
from .library import (
    CompiledLibrary,
    QueryLibrary,
    SubQuery,
    compile_library,
    import_elsevier,
    load_library,
    save_library,
)
from .query_lang import ParseError, ast_terms, format_query, parse_query
from .text_pipeline import NormalizedDoc, match_atom, normalize

__all__ = [
    "ClassificationResult",
    "CompiledLibrary",
    "MatchReport",
    "NormalizedDoc",
    "PaperRecord",
    "ParseError",
    "QueryLibrary",
    "SdgMatch",
    "SubQuery",
    "ast_terms",
    "classify",
    "compile_library",
    "consolidate",
    "detect_columns",
    "format_query",
    "import_elsevier",
    "load_library",
    "match_atom",
    "normalize",
    "parse_query",
    "rank",
    "read_batch",
    "save_library",
]
