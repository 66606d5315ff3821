"""Corpus loading and per-format text extraction.

Three source formats are supported, each tied to one document type:
failure cases arrive as plain text, project structures as nested element
trees (JSON), and product specifications as label-first TSV tables. An
element tree fans out into one extracted document per tree node so the
hierarchy becomes per-node parent links.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from ..errors import (
    CyclicStructure,
    DuplicateId,
    InvalidTypeFormatPair,
    ManifestMalformed,
    MissingDocumentFile,
    UnparseableContent,
)
from .rules import DomainRules, default_rules, load_rules


class SourceType(str, Enum):
    FAILURE_CASE = "failure_case"
    PROJECT_ELEMENT = "project_element"
    PRODUCT_SPEC = "product_spec"


class DocFormat(str, Enum):
    PLAIN_TEXT = "plain_text"
    ELEMENT_TREE = "element_tree"
    LABELED_TABLE = "labeled_table"


VALID_PAIRS = {
    SourceType.FAILURE_CASE: DocFormat.PLAIN_TEXT,
    SourceType.PROJECT_ELEMENT: DocFormat.ELEMENT_TREE,
    SourceType.PRODUCT_SPEC: DocFormat.LABELED_TABLE,
}


@dataclass
class RawDocument:
    id: str
    source_type: SourceType
    format: DocFormat
    content: bytes
    language: str = "en"
    metadata: dict[str, str] = field(default_factory=dict)


@dataclass
class ExtractedDocument:
    id: str
    source_type: SourceType
    text: str
    label: str
    structure: list[tuple[str, str]] = field(default_factory=list)
    labels: list[tuple[str, str]] | None = None


@dataclass
class Corpus:
    documents: list[RawDocument]
    rules: DomainRules


def load_corpus(manifest_path: str | Path) -> Corpus:
    """Read a corpus manifest and all document files it references."""
    manifest_path = Path(manifest_path)
    try:
        data = json.loads(manifest_path.read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise ManifestMalformed(f"manifest not found: {manifest_path}") from exc
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ManifestMalformed(f"cannot parse manifest {manifest_path}: {exc}") from exc
    if not isinstance(data, dict) or not isinstance(data.get("documents"), list):
        raise ManifestMalformed(f"{manifest_path}: expected an object with a 'documents' array")

    base_dir = manifest_path.parent
    rules = load_rules(base_dir / data["rules"]) if "rules" in data else default_rules()

    documents: list[RawDocument] = []
    seen: set[str] = set()
    for entry in data["documents"]:
        if not isinstance(entry, dict):
            raise ManifestMalformed(f"document entry must be an object: {entry!r}")
        missing = {"id", "type", "format", "path"} - entry.keys()
        if missing:
            raise ManifestMalformed(f"document entry missing keys {sorted(missing)}: {entry!r}")
        doc_id = entry["id"]
        if not doc_id or not isinstance(doc_id, str):
            raise ManifestMalformed(f"document id must be a non-empty string: {doc_id!r}")
        try:
            source_type = SourceType(entry["type"])
            doc_format = DocFormat(entry["format"])
        except ValueError as exc:
            raise ManifestMalformed(f"document {doc_id!r}: {exc}") from exc
        if VALID_PAIRS[source_type] is not doc_format:
            raise InvalidTypeFormatPair(doc_id, source_type.value, doc_format.value)
        if doc_id in seen:
            raise DuplicateId(doc_id)
        seen.add(doc_id)
        doc_path = base_dir / entry["path"]
        if not doc_path.is_file():
            raise MissingDocumentFile(str(doc_path))
        metadata = {
            k: str(v)
            for k, v in entry.items()
            if k not in {"id", "type", "format", "path", "language"}
        }
        documents.append(
            RawDocument(
                id=doc_id,
                source_type=source_type,
                format=doc_format,
                content=doc_path.read_bytes(),
                language=str(entry.get("language", "en")),
                metadata=metadata,
            )
        )
    return Corpus(documents=documents, rules=rules)


def extract_text(doc: RawDocument) -> list[ExtractedDocument]:
    """Turn a raw document into linear-text documents, one per logical unit."""
    try:
        text = doc.content.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise UnparseableContent(doc.id, f"content is not valid UTF-8: {exc}") from exc

    if doc.format is DocFormat.PLAIN_TEXT:
        label = doc.metadata.get("name", doc.id)
        return [ExtractedDocument(id=doc.id, source_type=doc.source_type, text=text, label=label)]
    if doc.format is DocFormat.ELEMENT_TREE:
        return _extract_tree(doc, text)
    return _extract_table(doc, text)


def _extract_tree(doc: RawDocument, text: str) -> list[ExtractedDocument]:
    try:
        root = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UnparseableContent(doc.id, f"element tree is not valid JSON: {exc}") from exc
    if not isinstance(root, dict):
        raise UnparseableContent(doc.id, "element tree root must be an object")

    out: list[ExtractedDocument] = []
    seen_ids: set[str] = set()

    def walk(node, parent_id: str | None, path: tuple[str, ...]):
        if not isinstance(node, dict):
            raise UnparseableContent(doc.id, f"element node must be an object: {node!r}")
        name = str(node.get("name", "")).strip()
        explicit = node.get("id")
        if explicit is not None:
            node_id = str(explicit)
        elif name:
            node_id = f"{doc.id}:{'.'.join(path + (name,))}"
        else:
            raise UnparseableContent(doc.id, "element node needs an 'id' or a 'name'")
        if node_id in seen_ids:
            # Repeated ids collapse the forest into a cycle or a multi-parent DAG.
            raise CyclicStructure(doc.id, node_id)
        seen_ids.add(node_id)

        description = str(node.get("description", "")).strip()
        parts = [p for p in (name, description) if p]
        structure = [(node_id, parent_id)] if parent_id is not None else []
        out.append(
            ExtractedDocument(
                id=node_id,
                source_type=doc.source_type,
                text=". ".join(parts),
                label=name or node_id,
                structure=structure,
            )
        )
        children = node.get("children", [])
        if not isinstance(children, list):
            raise UnparseableContent(doc.id, "element 'children' must be an array")
        for child in children:
            walk(child, node_id, path + (name,) if name else path)

    walk(root, None, ())
    return out


def _extract_table(doc: RawDocument, text: str) -> list[ExtractedDocument]:
    rows = list(csv.reader(io.StringIO(text), delimiter="\t"))
    if not rows:
        raise UnparseableContent(doc.id, "labeled table has no header row")
    labels: list[tuple[str, str]] = []
    for row in rows[1:]:
        if not row or not any(cell.strip() for cell in row):
            continue
        label = row[0].strip()
        labels.append((label, " ".join(cell.strip() for cell in row[1:] if cell.strip())))
    row_texts = [row_text for _, row_text in labels if row_text]
    return [
        ExtractedDocument(
            id=doc.id,
            source_type=doc.source_type,
            text=". ".join(row_texts),
            label=doc.metadata.get("name", doc.id),
            labels=labels,
        )
    ]
