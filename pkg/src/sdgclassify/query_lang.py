"""Boolean query language: lexer, recursive-descent parser and AST.

Grammar (precedence NOT > AND > OR, left-associative):

    query := or
    or    := and (OR and)*
    and   := not (AND not)*
    not   := NOT not | atom
    atom  := '(' query ')' | QUOTED | WORD

Operator keywords are matched case-insensitively; to search for the
literal word "and", "or" or "not" it must be quoted.  A trailing `*`
turns a word into a prefix match (e.g. sustainab*).  Words are folded
into document-token space at parse time, so a term like `covid-19`
becomes the phrase [covid, 19] and can actually match normalized text.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import ClassVar, Iterator, Union

from .text_pipeline import tokenize_text

OPERATORS = ("AND", "OR", "NOT")


class ParseError(Exception):
    """Raised for any malformed query string; never lets a crash escape."""

    def __init__(self, offset: int, message: str, lexeme: str = ""):
        self.offset = offset
        self.message = message
        self.lexeme = lexeme
        super().__init__(f"offset {offset}: {message}" + (f" ({lexeme!r})" if lexeme else ""))


@dataclass(frozen=True)
class PhraseWord:
    """One word of a phrase; `prefix` marks a trailing-wildcard word."""

    text: str
    prefix: bool = False


@dataclass(frozen=True)
class Term:
    kind: ClassVar[str] = "term"
    word: str


@dataclass(frozen=True)
class Prefix:
    kind: ClassVar[str] = "prefix"
    stem: str


@dataclass(frozen=True)
class Phrase:
    kind: ClassVar[str] = "phrase"
    words: tuple[PhraseWord, ...]

    def __post_init__(self):
        if len(self.words) < 2:
            raise ValueError("phrase needs at least two words")


@dataclass(frozen=True)
class And:
    kind: ClassVar[str] = "and"
    children: tuple["Node", ...]

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("AND needs at least two children")


@dataclass(frozen=True)
class Or:
    kind: ClassVar[str] = "or"
    children: tuple["Node", ...]

    def __post_init__(self):
        if len(self.children) < 2:
            raise ValueError("OR needs at least two children")


@dataclass(frozen=True)
class Not:
    kind: ClassVar[str] = "not"
    child: "Node"


Node = Union[Term, Prefix, Phrase, And, Or, Not]
Atom = Union[Term, Prefix, Phrase]


@dataclass(frozen=True)
class Lexeme:
    kind: str  # LPAREN RPAREN AND OR NOT QUOTED WORD
    text: str
    offset: int


def tokenize_query(raw: str) -> list[Lexeme]:
    """Split a raw query string into lexemes; quotes must balance."""
    lexemes: list[Lexeme] = []
    i = 0
    n = len(raw)
    while i < n:
        ch = raw[i]
        if ch.isspace():
            i += 1
            continue
        if ch == "(":
            lexemes.append(Lexeme("LPAREN", "(", i))
            i += 1
            continue
        if ch == ")":
            lexemes.append(Lexeme("RPAREN", ")", i))
            i += 1
            continue
        if ch == '"':
            end = raw.find('"', i + 1)
            if end < 0:
                raise ParseError(i, "unbalanced quote", '"')
            lexemes.append(Lexeme("QUOTED", raw[i + 1 : end], i))
            i = end + 1
            continue
        start = i
        while i < n and not raw[i].isspace() and raw[i] not in '()"':
            i += 1
        word = raw[start:i]
        if word.upper() in OPERATORS:
            lexemes.append(Lexeme(word.upper(), word, start))
        else:
            lexemes.append(Lexeme("WORD", word, start))
    return lexemes


def _convert_word(raw_word: str, offset: int) -> list[PhraseWord]:
    """Fold one raw query word into document-token space.

    Returns one PhraseWord per resulting token; the last one carries the
    prefix flag when the raw word ends in `*`.
    """
    wildcard = raw_word.endswith("*")
    stem = raw_word[:-1] if wildcard else raw_word
    if "*" in stem:
        raise ParseError(offset, "wildcard `*` only allowed at the end of a word", raw_word)
    pieces = tokenize_text(stem)
    if not pieces:
        raise ParseError(offset, "word has no searchable characters", raw_word)
    words = [PhraseWord(p) for p in pieces]
    if wildcard:
        words[-1] = PhraseWord(words[-1].text, prefix=True)
    return words


def _atom_from_words(words: list[PhraseWord]) -> Atom:
    if len(words) == 1:
        w = words[0]
        return Prefix(w.text) if w.prefix else Term(w.text)
    return Phrase(tuple(words))


_MAX_DEPTH = 150


class _Parser:
    def __init__(self, raw: str, lexemes: list[Lexeme]):
        self.raw = raw
        self.lexemes = lexemes
        self.pos = 0
        self.depth = 0

    def _descend(self, offset: int) -> None:
        self.depth += 1
        if self.depth > _MAX_DEPTH:
            raise ParseError(offset, f"query nested deeper than {_MAX_DEPTH} levels")

    def peek(self) -> Lexeme | None:
        return self.lexemes[self.pos] if self.pos < len(self.lexemes) else None

    def consume(self) -> Lexeme:
        lex = self.lexemes[self.pos]
        self.pos += 1
        return lex

    def parse(self) -> Node:
        node = self.parse_or()
        leftover = self.peek()
        if leftover is not None:
            raise ParseError(leftover.offset, "unexpected input after query", leftover.text)
        return node

    def parse_or(self) -> Node:
        parts = [self.parse_and()]
        while (lex := self.peek()) is not None and lex.kind == "OR":
            self.consume()
            parts.append(self.parse_and())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def parse_and(self) -> Node:
        parts = [self.parse_not()]
        while (lex := self.peek()) is not None and lex.kind == "AND":
            self.consume()
            parts.append(self.parse_not())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def parse_not(self) -> Node:
        lex = self.peek()
        if lex is not None and lex.kind == "NOT":
            self.consume()
            self._descend(lex.offset)
            try:
                return Not(self.parse_not())
            finally:
                self.depth -= 1
        return self.parse_atom()

    def parse_atom(self) -> Node:
        lex = self.peek()
        if lex is None:
            offset = self.lexemes[-1].offset if self.lexemes else 0
            raise ParseError(offset, "dangling operator: expected a term, phrase or `(`")
        if lex.kind == "LPAREN":
            self.consume()
            self._descend(lex.offset)
            try:
                node = self.parse_or()
            finally:
                self.depth -= 1
            closing = self.peek()
            if closing is None or closing.kind != "RPAREN":
                raise ParseError(lex.offset, "unbalanced parenthesis", "(")
            self.consume()
            return node
        if lex.kind == "QUOTED":
            self.consume()
            raw_words = lex.text.split()
            if not raw_words:
                raise ParseError(lex.offset, "empty quotes", '""')
            words: list[PhraseWord] = []
            for rw in raw_words:
                words.extend(_convert_word(rw, lex.offset))
            return _atom_from_words(words)
        if lex.kind == "WORD":
            self.consume()
            return _atom_from_words(_convert_word(lex.text, lex.offset))
        if lex.kind in OPERATORS:
            raise ParseError(
                lex.offset,
                f"operator {lex.kind} in term position; quote it to search the literal word",
                lex.text,
            )
        raise ParseError(lex.offset, "unexpected input", lex.text)


def parse_query(raw: str) -> Node:
    """Parse a raw query string into an AST; raises ParseError, never crashes."""
    if not raw.strip():
        raise ParseError(0, "empty query")
    lexemes = tokenize_query(raw)
    return _Parser(raw, lexemes).parse()


def format_query(node: Node) -> str:
    """Pretty-print an AST so that re-parsing yields the identical tree."""
    if isinstance(node, Term):
        if node.word.upper() in OPERATORS:
            return f'"{node.word}"'
        return node.word
    if isinstance(node, Prefix):
        return node.stem + "*"
    if isinstance(node, Phrase):
        return '"' + " ".join(w.text + ("*" if w.prefix else "") for w in node.words) + '"'
    if isinstance(node, Not):
        child = format_query(node.child)
        if isinstance(node.child, (And, Or)):
            child = f"({child})"
        return f"NOT {child}"
    if isinstance(node, And):
        # parenthesize OR (lower precedence) and nested AND (preserve shape)
        parts = [
            f"({format_query(c)})" if isinstance(c, (Or, And)) else format_query(c)
            for c in node.children
        ]
        return " AND ".join(parts)
    if isinstance(node, Or):
        parts = [
            f"({format_query(c)})" if isinstance(c, Or) else format_query(c)
            for c in node.children
        ]
        return " OR ".join(parts)
    raise TypeError(f"not a query node: {node!r}")


def iter_nodes(node: Node) -> Iterator[Node]:
    """Preorder walk over every node of the tree."""
    yield node
    if isinstance(node, (And, Or)):
        for child in node.children:
            yield from iter_nodes(child)
    elif isinstance(node, Not):
        yield from iter_nodes(node.child)


def ast_terms(ast: Node) -> list[tuple[int, Atom]]:
    """Collect every TERM/PREFIX/PHRASE leaf with a stable, deduplicated id.

    Ids follow first occurrence in preorder; structurally identical leaves
    share one id.
    """
    seen: dict[Atom, int] = {}
    for node in iter_nodes(ast):
        if isinstance(node, (Term, Prefix, Phrase)) and node not in seen:
            seen[node] = len(seen)
    return [(i, atom) for atom, i in seen.items()]
