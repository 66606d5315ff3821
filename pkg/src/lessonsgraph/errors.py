"""Domain error types.

Each error carries a stable ``code`` so the HTTP service and the CLI can map
failures onto machine-readable identifiers without string matching.
"""

from __future__ import annotations


class LessonsGraphError(Exception):
    """Base class for every domain error raised by this package."""

    code = "ERROR"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class ManifestMalformed(LessonsGraphError):
    code = "MANIFEST_MALFORMED"


class MissingDocumentFile(LessonsGraphError):
    code = "MISSING_DOCUMENT_FILE"

    def __init__(self, path: str):
        super().__init__(f"document file not found: {path}")
        self.path = str(path)


class DuplicateId(LessonsGraphError):
    code = "DUPLICATE_ID"

    def __init__(self, doc_id: str):
        super().__init__(f"duplicate document id: {doc_id!r}")
        self.doc_id = doc_id


class InvalidTypeFormatPair(LessonsGraphError):
    code = "INVALID_TYPE_FORMAT_PAIR"

    def __init__(self, doc_id: str, source_type: str, doc_format: str):
        super().__init__(
            f"document {doc_id!r}: source type {source_type!r} does not accept format {doc_format!r}"
        )
        self.doc_id = doc_id


class UnparseableContent(LessonsGraphError):
    code = "UNPARSEABLE_CONTENT"

    def __init__(self, doc_id: str, reason: str):
        super().__init__(f"document {doc_id!r}: {reason}")
        self.doc_id = doc_id


class CyclicStructure(LessonsGraphError):
    code = "CYCLIC_STRUCTURE"

    def __init__(self, doc_id: str, node_id: str):
        super().__init__(
            f"document {doc_id!r}: element {node_id!r} breaks the tree structure "
            "(repeated id or ancestor reference)"
        )
        self.doc_id = doc_id
        self.node_id = node_id


class EmptyCorpus(LessonsGraphError):
    code = "EMPTY_CORPUS"

    def __init__(self):
        super().__init__("cannot fit a model on an empty corpus")


class TermUnknown(LessonsGraphError):
    code = "TERM_UNKNOWN"

    def __init__(self, term: str):
        super().__init__(f"term not in model vocabulary: {term!r}")
        self.term = term


class DanglingParent(LessonsGraphError):
    code = "DANGLING_PARENT"

    def __init__(self, node_id: str, parent_id: str):
        super().__init__(f"element node {node_id!r} references missing parent {parent_id!r}")
        self.node_id = node_id
        self.parent_id = parent_id


class SchemaVersionMismatch(LessonsGraphError):
    code = "SCHEMA_VERSION_MISMATCH"

    def __init__(self, found):
        super().__init__(f"unsupported graph schema version: {found!r}")
        self.found = found


class CorruptFile(LessonsGraphError):
    code = "CORRUPT_FILE"

    def __init__(self, path: str, reason: str):
        super().__init__(f"cannot read graph file {path}: {reason}")
        self.path = str(path)


class EmptyQuery(LessonsGraphError):
    code = "EMPTY_QUERY"

    def __init__(self):
        super().__init__("query is empty after preprocessing")


class UnknownElement(LessonsGraphError):
    code = "UNKNOWN_ELEMENT"

    def __init__(self, element_id: str):
        super().__init__(f"no project element node with id {element_id!r}")
        self.element_id = element_id


class UnknownNode(LessonsGraphError):
    code = "UNKNOWN_NODE"

    def __init__(self, node_id: str):
        super().__init__(f"no node with id {node_id!r}")
        self.node_id = node_id
