from .corpus import (
    Corpus,
    DocFormat,
    ExtractedDocument,
    RawDocument,
    SourceType,
    extract_text,
    load_corpus,
)
from .pipeline import (
    PreprocessReport,
    Token,
    TokenKind,
    TokenizedDocument,
    apply_domain_rules,
    clean_text,
    normalize_tokens,
    preprocess,
    preprocess_corpus,
    tokenize,
)
from .rules import DomainRules, SymbolAction, SymbolPattern, default_rules, load_rules
from .stemming import LEMMA_EXCEPTIONS, porter_stem
from .stopwords import DEFAULT_STOPWORDS

__all__ = [
    "Corpus",
    "DEFAULT_STOPWORDS",
    "DocFormat",
    "DomainRules",
    "ExtractedDocument",
    "LEMMA_EXCEPTIONS",
    "PreprocessReport",
    "RawDocument",
    "SourceType",
    "SymbolAction",
    "SymbolPattern",
    "Token",
    "TokenKind",
    "TokenizedDocument",
    "apply_domain_rules",
    "clean_text",
    "default_rules",
    "extract_text",
    "load_corpus",
    "load_rules",
    "normalize_tokens",
    "porter_stem",
    "preprocess",
    "preprocess_corpus",
    "tokenize",
]
