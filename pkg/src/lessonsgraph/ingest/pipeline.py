"""Text preprocessing pipeline: clean, segment, apply domain rules, normalize.

The stages compose into :func:`preprocess`, a pure function of (document
content, rules): identical inputs always produce identical token output, and
documents can be processed in any order or in parallel.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

from ..errors import DuplicateId
from .corpus import Corpus, RawDocument, SourceType, extract_text
from .rules import DomainRules, SymbolAction, _compile
from .stemming import LEMMA_EXCEPTIONS, porter_stem

# Characters that survive cleaning: word characters (letters, digits,
# underscore), whitespace, and the four sentence boundary marks.
_DISALLOWED = re.compile(r"[^\w\s.!?;]+", re.UNICODE)
_WHITESPACE = re.compile(r"\s+")
_SENTENCE_BOUNDARY = re.compile(r"[.!?;]+")


class TokenKind(str, Enum):
    WORD = "word"
    SYMBOL = "symbol"
    ABBREV = "abbrev"
    NUMERIC = "numeric"


@dataclass(frozen=True)
class Token:
    surface: str
    normalized: str
    kind: TokenKind


@dataclass
class TokenizedDocument:
    id: str
    source_type: SourceType
    sentences: list[list[Token]]
    structure: list[tuple[str, str]] = field(default_factory=list)
    label: str = ""

    def terms(self):
        """All normalized terms in order of appearance."""
        for sentence in self.sentences:
            for token in sentence:
                yield token.normalized


def clean_text(text: str, rules: DomainRules) -> str:
    """Strip machine-generated boilerplate, then anything outside the allowed
    character classes, then collapse whitespace. Idempotent and total."""
    for pattern in rules.autogen_patterns:
        rx = _compile(pattern)
        for _ in range(100):  # re-apply until stable so cleaning is idempotent
            stripped = rx.sub("", text)
            if stripped == text:
                break
            text = stripped
    text = _DISALLOWED.sub("", text)
    return _WHITESPACE.sub(" ", text).strip()


def tokenize(text: str) -> list[list[str]]:
    """Cut cleaned text into sentences at . ! ? ; and sentences into tokens."""
    sentences = []
    for chunk in _SENTENCE_BOUNDARY.split(text):
        tokens = chunk.split()
        if tokens:
            sentences.append(tokens)
    return sentences


def _classify(surface: str, rules: DomainRules) -> list[Token]:
    lower = surface.lower()
    expansion = rules.abbreviations.get(lower)
    if expansion is not None:
        return [Token(surface, expansion, TokenKind.ABBREV)]
    for sp in rules.symbol_patterns:  # first matching pattern wins
        if sp.regex.search(surface):
            if sp.action is SymbolAction.PRESERVE_AS_SYMBOL:
                return [Token(surface, surface, TokenKind.SYMBOL)]
            if sp.action is SymbolAction.DELETE:
                return []
            parts = [p for p in sp.regex.split(surface) if p]
            return [_word_or_numeric(p) for p in parts]
    return [_word_or_numeric(surface)]


def _word_or_numeric(surface: str) -> Token:
    if any(ch.isdigit() for ch in surface):
        return Token(surface, surface, TokenKind.NUMERIC)
    return Token(surface, surface.lower(), TokenKind.WORD)


def apply_domain_rules(sentences: list[list[str]], rules: DomainRules) -> list[list[Token]]:
    """Map surface tokens to typed tokens via abbreviation and symbol rules."""
    out = []
    for sentence in sentences:
        tokens: list[Token] = []
        for surface in sentence:
            tokens.extend(_classify(surface, rules))
        if tokens:
            out.append(tokens)
    return out


def normalize_tokens(
    sentences: list[list[Token]], rules: DomainRules, language: str = "en"
) -> list[list[Token]]:
    """Stem word tokens and drop stopwords.

    Symbols, numerics and abbreviation expansions are exempt from stemming;
    so are underscore-bearing words (element identifiers). Non-English words
    pass through lowercased only. A token is a stopword when either its
    lowercased surface or its normalized form is listed.
    """
    out = []
    for sentence in sentences:
        kept = []
        for token in sentence:
            if token.kind is TokenKind.WORD:
                normalized = token.normalized
                if language == "en" and "_" not in normalized:
                    normalized = LEMMA_EXCEPTIONS.get(normalized, normalized)
                    normalized = porter_stem(normalized)
                if normalized != token.normalized:
                    token = Token(token.surface, normalized, TokenKind.WORD)
            if token.surface.lower() in rules.stopwords or token.normalized in rules.stopwords:
                continue
            kept.append(token)
        if kept:
            out.append(kept)
    return out


def preprocess(doc: RawDocument, rules: DomainRules) -> list[TokenizedDocument]:
    """Run the full pipeline on one raw document.

    Element trees yield one tokenized document per tree node, with the
    parent link retained; other formats yield exactly one.
    """
    results = []
    for extracted in extract_text(doc):
        cleaned = clean_text(extracted.text, rules)
        sentences = tokenize(cleaned)
        typed = apply_domain_rules(sentences, rules)
        normalized = normalize_tokens(typed, rules, language=doc.language)
        results.append(
            TokenizedDocument(
                id=extracted.id,
                source_type=doc.source_type,
                sentences=normalized,
                structure=list(extracted.structure),
                label=extracted.label,
            )
        )
    return results


@dataclass
class PreprocessReport:
    document_count: int = 0
    empty_documents: list[str] = field(default_factory=list)


def preprocess_corpus(corpus: Corpus) -> tuple[list[TokenizedDocument], PreprocessReport]:
    """Preprocess every document, enforcing corpus-wide id uniqueness.

    Documents whose text dissolves entirely (e.g. all stopwords) are kept
    with zero sentences and flagged in the report.
    """
    docs: list[TokenizedDocument] = []
    seen: set[str] = set()
    report = PreprocessReport()
    for raw in corpus.documents:
        for tokenized in preprocess(raw, corpus.rules):
            if tokenized.id in seen:
                raise DuplicateId(tokenized.id)
            seen.add(tokenized.id)
            docs.append(tokenized)
            if not tokenized.sentences:
                report.empty_documents.append(tokenized.id)
    report.document_count = len(docs)
    return docs, report
