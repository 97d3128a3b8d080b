"""Bundled fixtures: demo query library and labeled mini corpus."""

from pathlib import Path

_HERE = Path(__file__).parent

MINI_LIBRARY = _HERE / "mini_library.tsv"
MINI_CORPUS = _HERE / "mini_corpus.csv"
MINI_TRUTH = _HERE / "mini_truth.csv"
