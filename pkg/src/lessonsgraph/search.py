"""Two-stage graph search: base-node matching, then depth-bounded expansion.

Base nodes are documents matched directly by the query, either through
cosine overlap with their vector or through a linking node whose n-gram
occurs verbatim in the query. Expansion then walks logical hops outward: a
direct document-document edge is one hop, and a document-LN-document
traversal also counts as one hop, because the linking node reifies a single
relation rather than being a destination of its own. A node's score is the
best base score times the product of edge weights along its best path, so
scores never exceed the seeding base score and linking nodes never appear
in results.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .errors import EmptyQuery, UnknownElement, UnknownNode
from .ingest.pipeline import apply_domain_rules, clean_text, normalize_tokens, tokenize
from .ingest.rules import DomainRules
from .kgraph.model import KnowledgeGraph, NodeType, RelationCategory
from .vectorize import TfidfModel, cosine, sentence_ngrams

PathStep = tuple[RelationCategory, float]


@dataclass
class Query:
    raw: str
    tokens: list[str]
    vector: dict[str, float]
    ngrams: set[tuple[str, ...]]


@dataclass(frozen=True)
class SearchConfig:
    depth: int = 1
    result_types: frozenset[NodeType] = frozenset({NodeType.FC})
    limit: int = 20
    min_score: float = 0.05

    def __post_init__(self):
        if self.depth < 0:
            raise ValueError("depth must be >= 0")
        if self.limit < 1:
            raise ValueError("limit must be >= 1")
        if not self.min_score > 0:
            raise ValueError("min_score must be > 0")
        if NodeType.LN in self.result_types:
            raise ValueError("LN nodes are relation reifiers and can never be results")


@dataclass
class ScoredNode:
    node_id: str
    score: float
    base: bool
    best_path: tuple[PathStep, ...] = ()
    depth_used: int = 0


def parse_query(raw: str, rules: DomainRules, model: TfidfModel) -> Query:
    """Run the exact ingest pipeline over the query text.

    The query vector carries idf weights for each surviving in-vocabulary
    term; out-of-vocabulary terms cannot match any document vector or
    linking node, so they contribute nothing.
    """
    sentences = normalize_tokens(
        apply_domain_rules(tokenize(clean_text(raw, rules)), rules), rules
    )
    tokens = [token.normalized for sentence in sentences for token in sentence]
    if not tokens:
        raise EmptyQuery()
    vector = {term: model.idf[term] for term in set(tokens) if term in model.idf}
    ngrams = set(
        sentence_ngrams(
            ([token.normalized for token in sentence] for sentence in sentences), 3
        )
    )
    return Query(raw=raw, tokens=tokens, vector=vector, ngrams=ngrams)


def match_base_nodes(graph: KnowledgeGraph, query: Query) -> list[ScoredNode]:
    """Documents matched at distance zero.

    Any document whose vector shares weight with the query scores its cosine;
    any linking node whose n-gram occurs verbatim in the query promotes its
    attached documents at the n-gram weight n/3. Duplicates keep the maximum.
    """
    scores: dict[str, float] = {}
    for node_id in graph.document_ids():
        similarity = cosine(query.vector, graph.nodes[node_id].payload.entries)
        if similarity > 0:
            scores[node_id] = similarity
    ln_index = graph.ln_index()
    for gram in sorted(query.ngrams):
        ln_id = ln_index.get(gram)
        if ln_id is None:
            continue
        weight = graph.nodes[ln_id].payload.n / 3
        for neighbor, _ in graph.neighbors(ln_id):
            if weight > scores.get(neighbor, 0.0):
                scores[neighbor] = weight
    return [
        ScoredNode(node_id=node_id, score=score, base=True)
        for node_id, score in sorted(scores.items())
    ]


def _logical_neighbors(
    graph: KnowledgeGraph, node_id: str
) -> list[tuple[str, float, tuple[PathStep, ...]]]:
    """One-hop moves from a document node; LN pass-throughs are flattened."""
    moves: list[tuple[str, float, tuple[PathStep, ...]]] = []
    for neighbor, edge in graph.neighbors(node_id):
        if graph.nodes[neighbor].node_type is not NodeType.LN:
            moves.append((neighbor, edge.weight, ((edge.category, edge.weight),)))
            continue
        first = (edge.category, edge.weight)
        for target, second_edge in graph.neighbors(neighbor):
            if target == node_id:
                continue
            moves.append(
                (
                    target,
                    edge.weight * second_edge.weight,
                    (first, (second_edge.category, second_edge.weight)),
                )
            )
    moves.sort(key=lambda m: (m[0], m[2]))
    return moves


@dataclass
class _State:
    score: float
    hops: int
    path: tuple[PathStep, ...]


def expand(
    graph: KnowledgeGraph, base: Sequence[ScoredNode], config: SearchConfig
) -> list[ScoredNode]:
    """Best-score propagation out to ``config.depth`` logical hops.

    Layered relaxation: at each hop every improved node re-offers its score
    times the connecting edge weights. Scores only shrink along a path, so
    anything already below the floor can be pruned. Equal scores keep the
    earlier (shorter, lexicographically first) path for determinism.
    """
    best: dict[str, _State] = {}
    for seed in base:
        state = _State(score=seed.score, hops=0, path=())
        current = best.get(seed.node_id)
        if current is None or state.score > current.score:
            best[seed.node_id] = state
    frontier = dict(best)
    for hop in range(1, config.depth + 1):
        improved: dict[str, _State] = {}
        for node_id in sorted(frontier):
            origin = frontier[node_id]
            for target, weight, steps in _logical_neighbors(graph, node_id):
                score = origin.score * weight
                if score < config.min_score:
                    continue
                known = best.get(target)
                offer = improved.get(target)
                if (known is None or score > known.score) and (
                    offer is None or score > offer.score
                ):
                    improved[target] = _State(score=score, hops=hop, path=origin.path + steps)
        for node_id, state in improved.items():
            best[node_id] = state
        frontier = improved
    return [
        ScoredNode(
            node_id=node_id,
            score=state.score,
            base=state.hops == 0,
            best_path=state.path,
            depth_used=state.hops,
        )
        for node_id, state in sorted(best.items())
        if state.score >= config.min_score
    ]


def _rank(
    graph: KnowledgeGraph, expanded: Iterable[ScoredNode], config: SearchConfig
) -> list[ScoredNode]:
    results = [
        node for node in expanded if graph.nodes[node.node_id].node_type in config.result_types
    ]
    results.sort(key=lambda node: (-node.score, node.node_id))
    return results[: config.limit]


def search(
    graph: KnowledgeGraph, raw_query: str, config: SearchConfig | None = None
) -> list[ScoredNode]:
    """Parse, match, expand, filter, rank. Deterministic for fixed inputs."""
    config = config or SearchConfig()
    query = parse_query(raw_query, graph.rules, graph.model)
    base = match_base_nodes(graph, query)
    if not base:
        return []
    return _rank(graph, expand(graph, base, config), config)


def recommend(
    graph: KnowledgeGraph,
    element_id: str | None = None,
    element_text: str | None = None,
    config: SearchConfig | None = None,
) -> list[ScoredNode]:
    """Failure cases related to an inserted project element.

    An existing element seeds expansion directly at score 1.0; free element
    text goes through the normal query path. Results are always failure
    cases.
    """
    config = replace(config or SearchConfig(), result_types=frozenset({NodeType.FC}))
    if element_id is not None:
        node = graph.nodes.get(element_id)
        if node is None or node.node_type is not NodeType.PE:
            raise UnknownElement(element_id)
        base = [ScoredNode(node_id=element_id, score=1.0, base=True)]
    elif element_text is not None:
        query = parse_query(element_text, graph.rules, graph.model)
        base = match_base_nodes(graph, query)
    else:
        raise ValueError("recommend needs an element_id or element_text")
    if not base:
        return []
    return _rank(graph, expand(graph, base, config), config)


def reachable_within(graph: KnowledgeGraph, start: str, radius: int) -> dict[str, int]:
    """Document nodes within ``radius`` logical hops of ``start``.

    Uses the same hop semantics as :func:`expand` (LN pass-through is one
    hop) with no score floor, so reachability here matches search
    reachability at equal depth. A linking-node start reaches its attached
    documents at hop one.
    """
    if start not in graph.nodes:
        raise UnknownNode(start)
    distances: dict[str, int] = {}
    if graph.nodes[start].node_type is NodeType.LN:
        frontier = []
        if radius >= 1:
            for neighbor, _ in sorted(graph.neighbors(start)):
                if neighbor not in distances:
                    distances[neighbor] = 1
                    frontier.append(neighbor)
        start_hop = 2
    else:
        distances[start] = 0
        frontier = [start]
        start_hop = 1
    for hop in range(start_hop, radius + 1):
        next_frontier = []
        for node_id in sorted(frontier):
            for target, _, _ in _logical_neighbors(graph, node_id):
                if target not in distances:
                    distances[target] = hop
                    next_frontier.append(target)
        frontier = next_frontier
    return distances


def subgraph_slice(
    graph: KnowledgeGraph, node_id: str, radius: int
) -> tuple[list[str], list[int]]:
    """Neighborhood slice for visualization: node ids plus edge indexes.

    Unlike search results, linking nodes are included here so a viewer can
    see why documents connect; an LN makes the cut when at least two of its
    attachments are in the slice (or it is the start node itself).
    """
    if node_id not in graph.nodes:
        raise UnknownNode(node_id)
    if radius < 0:
        raise ValueError("radius must be >= 0")
    included = set(reachable_within(graph, node_id, radius))
    included.add(node_id)
    for ln_id in sorted(graph.nodes):
        if graph.nodes[ln_id].node_type is not NodeType.LN or ln_id in included:
            continue
        attached = sum(1 for neighbor, _ in graph.neighbors(ln_id) if neighbor in included)
        if attached >= 2:
            included.add(ln_id)
    edge_indexes = [
        i for i, edge in enumerate(graph.edges) if edge.a in included and edge.b in included
    ]
    return sorted(included), edge_indexes
