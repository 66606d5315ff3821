"""TF-IDF document vectors and n-gram pattern extraction.

Term weight is raw in-document count times ln(N / df). The log base only
scales all weights uniformly, so vector membership and ordering are
base-invariant except through ties, which are broken lexicographically.
N-grams (up to trigrams) are windows over normalized tokens that never cross
sentence boundaries; patterns occurring in at least two documents become
linking-node candidates.
"""

from __future__ import annotations

import json
import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import EmptyCorpus, TermUnknown
from .ingest.pipeline import TokenizedDocument


@dataclass
class TfidfModel:
    n_documents: int
    df: dict[str, int]
    idf: dict[str, float]

    def to_dict(self) -> dict:
        return {"N": self.n_documents, "df": dict(sorted(self.df.items()))}

    @classmethod
    def from_dict(cls, data: dict) -> "TfidfModel":
        n = int(data["N"])
        df = {str(t): int(c) for t, c in data["df"].items()}
        return cls(n_documents=n, df=df, idf={t: math.log(n / c) for t, c in df.items()})


@dataclass
class DocumentVector:
    doc_id: str
    entries: dict[str, float]
    capacity: int


@dataclass(frozen=True)
class NGram:
    terms: tuple[str, ...]
    n: int
    postings: frozenset[str]

    @property
    def df(self) -> int:
        return len(self.postings)


@dataclass(frozen=True)
class LnConstraints:
    n_max: int = 3
    max_unigram_df_ratio: float = 0.2

    def __post_init__(self):
        if self.n_max not in (1, 2, 3):
            raise ValueError(f"n_max must be 1, 2 or 3, got {self.n_max}")
        if not 0 < self.max_unigram_df_ratio <= 1:
            raise ValueError("max_unigram_df_ratio must be in (0, 1]")

    def to_dict(self) -> dict:
        return {"n_max": self.n_max, "max_unigram_df_ratio": self.max_unigram_df_ratio}

    @classmethod
    def from_dict(cls, data: dict) -> "LnConstraints":
        return cls(
            n_max=int(data.get("n_max", 3)),
            max_unigram_df_ratio=float(data.get("max_unigram_df_ratio", 0.2)),
        )


def fit_model(corpus: Sequence[TokenizedDocument]) -> TfidfModel:
    """Count document frequencies over the corpus; empty documents count toward N."""
    if not corpus:
        raise EmptyCorpus()
    df: Counter[str] = Counter()
    for doc in corpus:
        for term in set(doc.terms()):
            df[term] += 1
    n = len(corpus)
    df_sorted = dict(sorted(df.items()))
    return TfidfModel(
        n_documents=n,
        df=df_sorted,
        idf={term: math.log(n / count) for term, count in df_sorted.items()},
    )


def score_tfidf(term: str, doc: TokenizedDocument, model: TfidfModel) -> float:
    """Raw term count in ``doc`` times idf. Unknown vocabulary is an error,
    distinct from a present term scoring zero."""
    idf = model.idf.get(term)
    if idf is None:
        raise TermUnknown(term)
    tf = sum(1 for t in doc.terms() if t == term)
    return tf * idf


def document_vector(doc: TokenizedDocument, model: TfidfModel, k: int) -> DocumentVector:
    """The top-k positively scoring terms of ``doc``; ties keep the
    lexicographically smaller term."""
    if k < 1:
        raise ValueError(f"vector capacity must be >= 1, got {k}")
    counts = Counter(doc.terms())
    scored = []
    for term, count in counts.items():
        idf = model.idf.get(term)
        if idf is None:
            continue
        weight = count * idf
        if weight > 0:
            scored.append((term, weight))
    scored.sort(key=lambda item: (-item[1], item[0]))
    return DocumentVector(doc_id=doc.id, entries=dict(scored[:k]), capacity=k)


def sentence_ngrams(sentences: Iterable[Sequence[str]], n_max: int) -> list[tuple[str, ...]]:
    """Every sliding-window n-gram occurrence, per sentence, for n = 1..n_max."""
    if n_max not in (1, 2, 3):
        raise ValueError(f"n_max must be 1, 2 or 3, got {n_max}")
    grams: list[tuple[str, ...]] = []
    for terms in sentences:
        length = len(terms)
        for n in range(1, n_max + 1):
            for i in range(length - n + 1):
                grams.append(tuple(terms[i : i + n]))
    return grams


def extract_ngrams(doc: TokenizedDocument, n_max: int = 3) -> list[tuple[str, ...]]:
    return sentence_ngrams(
        ([token.normalized for token in sentence] for sentence in doc.sentences), n_max
    )


def linking_candidates(
    corpus: Sequence[TokenizedDocument], constraints: LnConstraints
) -> list[NGram]:
    """Merge per-document n-grams into postings and keep the linking ones.

    A pattern links only if it occurs in at least two documents; unigrams are
    additionally rejected when purely numeric or when they occur in more than
    ceil(ratio * N) documents (hub terms saturate the graph).
    """
    postings: dict[tuple[str, ...], set[str]] = defaultdict(set)
    for doc in corpus:
        for gram in set(extract_ngrams(doc, constraints.n_max)):
            postings[gram].add(doc.id)
    unigram_cap = math.ceil(constraints.max_unigram_df_ratio * len(corpus))
    candidates = []
    for gram in sorted(postings):
        ids = postings[gram]
        if len(ids) < 2:
            continue
        if len(gram) == 1 and (gram[0].isdigit() or len(ids) > unigram_cap):
            continue
        candidates.append(NGram(terms=gram, n=len(gram), postings=frozenset(ids)))
    return candidates


def cosine(a: Mapping[str, float], b: Mapping[str, float]) -> float:
    """Cosine similarity of two sparse term-weight vectors, clamped to [0, 1]."""
    if not a or not b:
        return 0.0
    if len(b) < len(a):
        a, b = b, a
    dot = sum(weight * b[term] for term, weight in a.items() if term in b)
    if dot == 0.0:
        return 0.0
    norm_sq_a = sum(w * w for w in a.values())
    norm_sq_b = sum(w * w for w in b.values())
    # sqrt of the product (not product of sqrts) keeps identical vectors at 1.0
    return min(1.0, dot / math.sqrt(norm_sq_a * norm_sq_b))


def export_model(model: TfidfModel, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(model.to_dict(), sort_keys=True, separators=(",", ":")) + "\n",
        encoding="utf-8",
    )


def export_vectors(
    corpus: Sequence[TokenizedDocument], model: TfidfModel, k: int, path: str | Path
) -> None:
    """One JSON line per document: {"doc_id": ..., "terms": {term: weight}}."""
    with Path(path).open("w", encoding="utf-8") as fh:
        for doc in corpus:
            vector = document_vector(doc, model, k)
            fh.write(
                json.dumps(
                    {"doc_id": vector.doc_id, "terms": vector.entries},
                    sort_keys=True,
                    separators=(",", ":"),
                )
                + "\n"
            )
