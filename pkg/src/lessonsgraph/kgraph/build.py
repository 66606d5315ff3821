"""Knowledge graph construction: document nodes, then relation extraction.

The enabled-category set on the config acts as an ablation switch: disabling
a category removes exactly that category's edges (and any linking node left
with fewer than two document attachments). Construction is deterministic for
fixed inputs and configs A subseteq B produce graphs with nodes(A) subseteq
nodes(B) and edges(A) subseteq edges(B).
"""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

from ..errors import DanglingParent
from ..ingest.corpus import Corpus, load_corpus
from ..ingest.pipeline import PreprocessReport, TokenizedDocument, preprocess_corpus
from ..ingest.rules import DomainRules
from ..vectorize import (
    NGram,
    TfidfModel,
    cosine,
    document_vector,
    extract_ngrams,
    fit_model,
    linking_candidates,
)
from .model import (
    DOCUMENT_TYPES,
    LN_CATEGORIES,
    LN_CATEGORY,
    GraphConfig,
    KnowledgeGraph,
    Node,
    NodeType,
    RelationCategory,
    SOURCE_TO_NODE,
)


def create_document_nodes(
    graph: KnowledgeGraph, corpus: Sequence[TokenizedDocument], model: TfidfModel
) -> KnowledgeGraph:
    """One node per document; kept even when the vector comes out empty."""
    for doc in corpus:
        node_type = SOURCE_TO_NODE[doc.source_type]
        parent = None
        if node_type is NodeType.PE:
            for child_id, parent_id in doc.structure:
                if child_id == doc.id:
                    parent = parent_id
        graph.add_node(
            Node(
                id=doc.id,
                node_type=node_type,
                label=doc.label or doc.id,
                payload=document_vector(doc, model, graph.config.k),
                structure_parent=parent,
            )
        )
    return graph


def insert_linking_nodes(graph: KnowledgeGraph, candidates: Sequence[NGram]) -> KnowledgeGraph:
    """Reify each shared n-gram as an LN wired to its posting documents.

    Edge weight is n/3, so trigram links outweigh bigrams outweigh unigrams.
    An LN is only created when at least two of its document edges fall in
    enabled categories; otherwise it would link nothing.
    """
    enabled = graph.config.enabled_relation_categories
    for candidate in candidates:
        if candidate.df < 2:
            raise ValueError(
                f"linking candidate {candidate.terms!r} must connect >= 2 documents"
            )
        attachments = []
        for doc_id in sorted(candidate.postings):
            node = graph.nodes.get(doc_id)
            if node is None:
                raise ValueError(f"linking candidate posting {doc_id!r} has no node")
            category = LN_CATEGORY[node.node_type]
            if category in enabled:
                attachments.append((doc_id, category))
        if len(attachments) < 2:
            continue
        ln_id = f"ln:{candidate.n}:{' '.join(candidate.terms)}"
        graph.add_node(
            Node(
                id=ln_id,
                node_type=NodeType.LN,
                label=" ".join(candidate.terms),
                payload=candidate,
            )
        )
        weight = candidate.n / 3
        for doc_id, category in attachments:
            graph.add_edge(doc_id, ln_id, category, weight)
    return graph


def link_intra_fc(
    graph: KnowledgeGraph,
    doc_ngrams: Mapping[str, frozenset[tuple[str, ...]]],
    min_mass: int,
    mass_cap: int,
) -> KnowledgeGraph:
    """Connect failure-case pairs by shared textual patterns.

    The evidence for a pair is its pattern mass: the sum of n over the
    distinct n-grams both documents contain. Pairs at or above ``min_mass``
    get an edge weighted min(1, mass / mass_cap).
    """
    fc_ids = sorted(
        node_id
        for node_id, node in graph.nodes.items()
        if node.node_type is NodeType.FC and node_id in doc_ngrams
    )
    for i, a in enumerate(fc_ids):
        grams_a = doc_ngrams[a]
        for b in fc_ids[i + 1 :]:
            mass = sum(len(gram) for gram in grams_a & doc_ngrams[b])
            if mass >= min_mass:
                graph.add_edge(a, b, RelationCategory.FC_FC, min(1.0, mass / mass_cap))
    return graph


def link_intra_pe(graph: KnowledgeGraph) -> KnowledgeGraph:
    """One weight-1.0 edge per parent link in the element hierarchy."""
    for node_id in sorted(graph.nodes):
        node = graph.nodes[node_id]
        if node.node_type is not NodeType.PE or node.structure_parent is None:
            continue
        parent = graph.nodes.get(node.structure_parent)
        if parent is None:
            raise DanglingParent(node_id, node.structure_parent)
        graph.add_edge(
            node.structure_parent,
            node_id,
            RelationCategory.PE_PE,
            1.0,
            direction_meta=(node.structure_parent, node_id),
        )
    return graph


def link_inter_vector(graph: KnowledgeGraph, threshold: float) -> KnowledgeGraph:
    """Cross-type edges wherever two document vectors are cosine-similar."""
    doc_ids = [
        node_id
        for node_id in sorted(graph.nodes)
        if graph.nodes[node_id].node_type in DOCUMENT_TYPES
    ]
    for i, a in enumerate(doc_ids):
        node_a = graph.nodes[a]
        for b in doc_ids[i + 1 :]:
            node_b = graph.nodes[b]
            if node_a.node_type is node_b.node_type:
                continue
            similarity = cosine(node_a.payload.entries, node_b.payload.entries)
            if similarity >= threshold:
                graph.add_edge(a, b, RelationCategory.XVEC, similarity)
    return graph


def build_graph(
    corpus: Sequence[TokenizedDocument],
    model: TfidfModel,
    config: GraphConfig,
    rules: DomainRules,
) -> KnowledgeGraph:
    """Compose the construction steps, honoring the enabled-category switch."""
    graph = KnowledgeGraph(config=config, rules=rules, model=model)
    create_document_nodes(graph, corpus, model)
    enabled = config.enabled_relation_categories
    if enabled & LN_CATEGORIES:
        insert_linking_nodes(graph, linking_candidates(corpus, config.ln_constraints))
    if RelationCategory.FC_FC in enabled:
        doc_ngrams = {
            doc.id: frozenset(extract_ngrams(doc, config.ln_constraints.n_max))
            for doc in corpus
            if SOURCE_TO_NODE[doc.source_type] is NodeType.FC
        }
        link_intra_fc(graph, doc_ngrams, config.fc_fc_min_pattern_mass, config.fc_fc_mass_cap)
    if RelationCategory.PE_PE in enabled:
        link_intra_pe(graph)
    if RelationCategory.XVEC in enabled:
        link_inter_vector(graph, config.xvec_similarity_threshold)
    return graph


def build_from_manifest(
    manifest_path: str | Path, config: GraphConfig | None = None
) -> tuple[KnowledgeGraph, PreprocessReport]:
    """Full pipeline: load, preprocess, fit the model, build the graph."""
    corpus: Corpus = load_corpus(manifest_path)
    docs, report = preprocess_corpus(corpus)
    model = fit_model(docs)
    graph = build_graph(docs, model, config or GraphConfig(), corpus.rules)
    return graph, report
