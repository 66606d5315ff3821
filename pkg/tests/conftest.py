"""Shared fixtures: a small handwritten corpus exercising every rule kind."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from lessonsgraph.ingest import (
    SourceType,
    Token,
    TokenKind,
    TokenizedDocument,
    load_corpus,
    preprocess_corpus,
)
from lessonsgraph.kgraph import GraphConfig, build_graph
from lessonsgraph.vectorize import fit_model

FIXTURE_TEXTS = {
    "fc1": "The oscillator failed at startup! Replace the crystal oscillator.",
    "fc2": "[AUTO-EXPORT v2] Oscillator drift caused failure. The crystal oscillator failed again.",
    "fc3": "Power regulator overheated. VDD__CORE rail collapsed; replace regulator.",
    "fc4": "Clock tree jitter exceeded budget. Osc calibration was skipped.",
    "fc5": "Voltage spike on VDD_CORE during test. 3v3 supply sagged.",
}

FIXTURE_RULES = {
    "abbreviations": {"osc": "oscillator"},
    "symbol_patterns": [
        {"pattern": "__+", "action": "split"},
        {"pattern": "^[A-Z0-9]+(_[A-Z0-9]+)+$", "action": "preserve_as_symbol"},
    ],
    "autogen_patterns": ["\\[AUTO-EXPORT.*?\\]"],
}

FIXTURE_TREE = {
    "id": "chip",
    "name": "chip",
    "description": "Top level microchip assembly",
    "children": [
        {"id": "osc", "name": "oscillator", "description": "Crystal oscillator block"},
        {"id": "reg", "name": "regulator", "description": "Power regulator block"},
    ],
}

FIXTURE_TABLE = (
    "label\ttext\n"
    "frequency\tCrystal oscillator frequency stability\n"
    "power\tRegulator output voltage level\n"
)


def write_fixture_corpus(root: Path) -> Path:
    docs = root / "docs"
    docs.mkdir(parents=True, exist_ok=True)
    for doc_id, text in FIXTURE_TEXTS.items():
        (docs / f"{doc_id}.txt").write_text(text, encoding="utf-8")
    (docs / "tree.json").write_text(json.dumps(FIXTURE_TREE), encoding="utf-8")
    (docs / "spec1.tsv").write_text(FIXTURE_TABLE, encoding="utf-8")
    (root / "rules.json").write_text(json.dumps(FIXTURE_RULES), encoding="utf-8")
    manifest = {
        "rules": "rules.json",
        "documents": [
            {"id": d, "type": "failure_case", "format": "plain_text", "path": f"docs/{d}.txt"}
            for d in FIXTURE_TEXTS
        ]
        + [
            {"id": "tree", "type": "project_element", "format": "element_tree", "path": "docs/tree.json"},
            {"id": "spec1", "type": "product_spec", "format": "labeled_table", "path": "docs/spec1.tsv"},
        ],
    }
    manifest_path = root / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=1), encoding="utf-8")
    return manifest_path


@pytest.fixture(scope="session")
def fixture_manifest(tmp_path_factory) -> Path:
    return write_fixture_corpus(tmp_path_factory.mktemp("fixture-corpus"))


@pytest.fixture(scope="session")
def fixture_corpus(fixture_manifest):
    return load_corpus(fixture_manifest)


@pytest.fixture(scope="session")
def fixture_docs(fixture_corpus):
    docs, _ = preprocess_corpus(fixture_corpus)
    return docs


@pytest.fixture(scope="session")
def fixture_model(fixture_docs):
    return fit_model(fixture_docs)


@pytest.fixture(scope="session")
def fixture_graph(fixture_corpus, fixture_docs, fixture_model):
    return build_graph(fixture_docs, fixture_model, GraphConfig(), fixture_corpus.rules)


def doc_of(doc_id: str, sentences: list[list[str]], source=SourceType.FAILURE_CASE, **kwargs):
    """TokenizedDocument from plain term lists (terms already normalized)."""
    return TokenizedDocument(
        id=doc_id,
        source_type=source,
        sentences=[
            [Token(term, term, TokenKind.WORD) for term in sentence] for sentence in sentences
        ],
        label=kwargs.get("label", doc_id),
        structure=kwargs.get("structure", []),
    )
