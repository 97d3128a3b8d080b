"""Document text normalization and atom matching.

Deliberately lightweight: lowercase everything, strip punctuation, keep
every token. No stopword removal, no stemming, no lemmatization -- the
query library relies on explicit keyword patterns and wildcards, so the
text must stay as close to the source as possible.
"""

from __future__ import annotations

import unicodedata
from bisect import bisect_left
from dataclasses import dataclass, field


def fold_text(text: str) -> str:
    """Fold diacritics to ASCII where a decomposition exists and casefold.

    Characters without a compatibility decomposition (e.g. CJK) are kept.
    """
    decomposed = unicodedata.normalize("NFKD", text)
    stripped = "".join(ch for ch in decomposed if not unicodedata.combining(ch))
    folded = stripped.casefold()
    # casefold can reintroduce decomposable characters (e.g. U+0130)
    decomposed = unicodedata.normalize("NFKD", folded)
    stripped = "".join(ch for ch in decomposed if not unicodedata.combining(ch))
    # a few scripts (Cherokee) case-fold toward uppercase; force lowercase
    return stripped.lower()


def tokenize_text(text: str) -> list[str]:
    """Split folded text into tokens; every non-alphanumeric char is a separator."""
    folded = fold_text(text)
    chars = [ch if ch.isalnum() else " " for ch in folded]
    return "".join(chars).split()


@dataclass
class NormalizedDoc:
    """Lowercased token sequence with a positional index."""

    tokens: list[str]
    positions: dict[str, list[int]]
    char_length: int
    _sorted_vocab: list[str] = field(default_factory=list, repr=False)

    def __post_init__(self) -> None:
        if not self._sorted_vocab:
            self._sorted_vocab = sorted(self.positions)

    def tokens_with_prefix(self, stem: str) -> list[str]:
        """All distinct tokens starting with `stem`, in sorted order."""
        vocab = self._sorted_vocab
        lo = bisect_left(vocab, stem)
        out = []
        for i in range(lo, len(vocab)):
            if not vocab[i].startswith(stem):
                break
            out.append(vocab[i])
        return out

    def has_token(self, word: str) -> bool:
        return word in self.positions

    def has_prefix(self, stem: str) -> bool:
        vocab = self._sorted_vocab
        lo = bisect_left(vocab, stem)
        return lo < len(vocab) and vocab[lo].startswith(stem)


def normalize(text: str) -> NormalizedDoc:
    """Normalize a raw document string into a token sequence plus index."""
    tokens = tokenize_text(text)
    positions: dict[str, list[int]] = {}
    for i, tok in enumerate(tokens):
        positions.setdefault(tok, []).append(i)
    return NormalizedDoc(tokens=tokens, positions=positions, char_length=len(text))


def _word_matches(token: str, text: str, prefix: bool) -> bool:
    return token.startswith(text) if prefix else token == text


def match_atom(doc: NormalizedDoc, atom) -> bool:
    """Check one query atom against a document.

    Atoms are duck-typed on their `kind` attribute: "term" (exact token),
    "prefix" (token starts with stem) or "phrase" (contiguous token run,
    each word exact or prefix).
    """
    kind = atom.kind
    if kind == "term":
        return doc.has_token(atom.word)
    if kind == "prefix":
        return doc.has_prefix(atom.stem)
    if kind == "phrase":
        return _match_phrase(doc, atom.words)
    raise ValueError(f"unknown atom kind: {kind!r}")


def _match_phrase(doc: NormalizedDoc, words) -> bool:
    """Phrase matching: anchor on the cheapest word, then verify contiguity."""
    first = words[0]
    if first.prefix:
        starts: list[int] = []
        for tok in doc.tokens_with_prefix(first.text):
            starts.extend(doc.positions[tok])
        starts.sort()
    else:
        starts = doc.positions.get(first.text, [])
    n = len(doc.tokens)
    k = len(words)
    for start in starts:
        if start + k > n:
            continue
        if all(
            _word_matches(doc.tokens[start + j], words[j].text, words[j].prefix)
            for j in range(1, k)
        ):
            return True
    return False
