"""Typed, weighted, undirected knowledge graph.

Nodes are documents (FC, PE, PS) carrying their TF-IDF vector, or linking
nodes (LN) carrying the shared n-gram they reify. The edge category is
uniquely determined by the endpoint types; linking nodes sit on one side of
every edge they touch (the LN layer is bipartite). After construction the
graph is treated as immutable, so any number of readers may traverse it
concurrently.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

from ..ingest.corpus import SourceType
from ..ingest.rules import DomainRules
from ..vectorize import DocumentVector, LnConstraints, NGram, TfidfModel


class NodeType(str, Enum):
    FC = "FC"
    PE = "PE"
    PS = "PS"
    LN = "LN"


DOCUMENT_TYPES = frozenset({NodeType.FC, NodeType.PE, NodeType.PS})

SOURCE_TO_NODE = {
    SourceType.FAILURE_CASE: NodeType.FC,
    SourceType.PROJECT_ELEMENT: NodeType.PE,
    SourceType.PRODUCT_SPEC: NodeType.PS,
}


class RelationCategory(str, Enum):
    FC_FC = "FC_FC"
    PE_PE = "PE_PE"
    FC_LN = "FC_LN"
    PE_LN = "PE_LN"
    PS_LN = "PS_LN"
    XVEC = "XVEC"


LN_CATEGORY = {
    NodeType.FC: RelationCategory.FC_LN,
    NodeType.PE: RelationCategory.PE_LN,
    NodeType.PS: RelationCategory.PS_LN,
}

LN_CATEGORIES = frozenset(LN_CATEGORY.values())

ALL_CATEGORIES = frozenset(RelationCategory)

# Shorthand accepted in configuration files: "LN" enables all three
# document-to-linking-node categories at once.
_CATEGORY_ALIASES = {"LN": LN_CATEGORIES}


def expand_category_tokens(tokens: Iterable[str]) -> frozenset[RelationCategory]:
    categories: set[RelationCategory] = set()
    for token in tokens:
        alias = _CATEGORY_ALIASES.get(token)
        if alias is not None:
            categories |= alias
        else:
            categories.add(RelationCategory(token))
    return frozenset(categories)


def category_for(a: NodeType, b: NodeType) -> RelationCategory | None:
    """The single relation category an (unordered) endpoint-type pair admits."""
    if a is NodeType.LN and b is NodeType.LN:
        return None
    if a is NodeType.LN:
        return LN_CATEGORY[b]
    if b is NodeType.LN:
        return LN_CATEGORY[a]
    if a is b:
        if a is NodeType.FC:
            return RelationCategory.FC_FC
        if a is NodeType.PE:
            return RelationCategory.PE_PE
        return None  # product specifications carry no intra-type relation
    return RelationCategory.XVEC


@dataclass
class Node:
    id: str
    node_type: NodeType
    label: str
    payload: DocumentVector | NGram
    structure_parent: str | None = None

    def __post_init__(self):
        if self.node_type is NodeType.LN:
            if not isinstance(self.payload, NGram):
                raise ValueError(f"LN node {self.id!r} must carry an n-gram payload")
        elif not isinstance(self.payload, DocumentVector):
            raise ValueError(f"document node {self.id!r} must carry a vector payload")
        if self.structure_parent is not None and self.node_type is not NodeType.PE:
            raise ValueError(f"node {self.id!r}: only PE nodes may have a structure parent")


@dataclass
class Edge:
    a: str
    b: str
    category: RelationCategory
    weight: float
    direction_meta: tuple[str, str] | None = None

    def other(self, node_id: str) -> str:
        return self.b if node_id == self.a else self.a


@dataclass(frozen=True)
class GraphConfig:
    k: int = 20
    ln_constraints: LnConstraints = field(default_factory=LnConstraints)
    xvec_similarity_threshold: float = 0.25
    fc_fc_min_pattern_mass: int = 3
    fc_fc_mass_cap: int = 9
    enabled_relation_categories: frozenset[RelationCategory] = ALL_CATEGORIES

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("vector capacity k must be >= 1")
        if not 0 < self.xvec_similarity_threshold < 1:
            raise ValueError("xvec_similarity_threshold must be in (0, 1)")
        if not 1 <= self.fc_fc_min_pattern_mass <= self.fc_fc_mass_cap:
            raise ValueError("need fc_fc_mass_cap >= fc_fc_min_pattern_mass >= 1")

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "ln_constraints": self.ln_constraints.to_dict(),
            "xvec_similarity_threshold": self.xvec_similarity_threshold,
            "fc_fc_min_pattern_mass": self.fc_fc_min_pattern_mass,
            "fc_fc_mass_cap": self.fc_fc_mass_cap,
            "enabled_relation_categories": sorted(
                c.value for c in self.enabled_relation_categories
            ),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GraphConfig":
        kwargs = {}
        if "k" in data:
            kwargs["k"] = int(data["k"])
        if "ln_constraints" in data:
            kwargs["ln_constraints"] = LnConstraints.from_dict(data["ln_constraints"])
        if "xvec_similarity_threshold" in data:
            kwargs["xvec_similarity_threshold"] = float(data["xvec_similarity_threshold"])
        if "fc_fc_min_pattern_mass" in data:
            kwargs["fc_fc_min_pattern_mass"] = int(data["fc_fc_min_pattern_mass"])
        if "fc_fc_mass_cap" in data:
            kwargs["fc_fc_mass_cap"] = int(data["fc_fc_mass_cap"])
        if "enabled_relation_categories" in data:
            kwargs["enabled_relation_categories"] = expand_category_tokens(
                data["enabled_relation_categories"]
            )
        return cls(**kwargs)


class KnowledgeGraph:
    """Node store plus symmetric adjacency, with the build inputs attached.

    The fitted TF-IDF model and the preprocessing rules travel with the graph
    so queries are parsed with exactly the fingerprint the graph was built
    under.
    """

    def __init__(self, config: GraphConfig, rules: DomainRules, model: TfidfModel):
        self.config = config
        self.rules = rules
        self.model = model
        self.nodes: dict[str, Node] = {}
        self.edges: list[Edge] = []
        self._adjacency: dict[str, list[int]] = {}
        self._edge_keys: set[tuple[str, str, RelationCategory]] = set()
        self._ln_index: dict[tuple[str, ...], str] | None = None

    def add_node(self, node: Node) -> None:
        if node.id in self.nodes:
            raise ValueError(f"node {node.id!r} already present")
        self.nodes[node.id] = node
        self._adjacency[node.id] = []
        self._ln_index = None

    def add_edge(
        self,
        a: str,
        b: str,
        category: RelationCategory,
        weight: float,
        direction_meta: tuple[str, str] | None = None,
    ) -> Edge:
        if a == b:
            raise ValueError(f"self-loop on {a!r}")
        if a not in self.nodes or b not in self.nodes:
            raise ValueError(f"edge endpoints must exist: {a!r}, {b!r}")
        if not 0 < weight <= 1:
            raise ValueError(f"edge weight must be in (0, 1], got {weight}")
        expected = category_for(self.nodes[a].node_type, self.nodes[b].node_type)
        if expected is not category:
            raise ValueError(
                f"category {category.value} invalid for endpoint types "
                f"{self.nodes[a].node_type.value}-{self.nodes[b].node_type.value}"
            )
        if a > b:
            a, b = b, a
        key = (a, b, category)
        if key in self._edge_keys:
            raise ValueError(f"duplicate edge {key}")
        self._edge_keys.add(key)
        edge = Edge(a=a, b=b, category=category, weight=weight, direction_meta=direction_meta)
        self.edges.append(edge)
        index = len(self.edges) - 1
        self._adjacency[a].append(index)
        self._adjacency[b].append(index)
        return edge

    def neighbors(self, node_id: str) -> list[tuple[str, Edge]]:
        return [
            (self.edges[i].other(node_id), self.edges[i]) for i in self._adjacency[node_id]
        ]

    def document_ids(self) -> list[str]:
        return sorted(
            node_id for node_id, node in self.nodes.items() if node.node_type is not NodeType.LN
        )

    def ln_index(self) -> dict[tuple[str, ...], str]:
        """Lookup from n-gram terms to the linking node reifying them."""
        if self._ln_index is None:
            self._ln_index = {
                node.payload.terms: node_id
                for node_id, node in self.nodes.items()
                if node.node_type is NodeType.LN
            }
        return self._ln_index

    def fingerprint(self) -> str:
        payload = json.dumps(
            {"config": self.config.to_dict(), "rules": self.rules.to_dict()},
            sort_keys=True,
            separators=(",", ":"),
        )
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()


# Row orders pinned to the shape of the paper-style reports: the three node
# categories and four relation categories always appear, anything else only
# when present in the graph.
CORE_NODE_ROWS = (NodeType.FC, NodeType.LN, NodeType.PE)
CORE_RELATION_ROWS = (
    RelationCategory.FC_FC,
    RelationCategory.PE_PE,
    RelationCategory.PE_LN,
    RelationCategory.FC_LN,
)


@dataclass
class GraphStats:
    node_rows: list[tuple[str, int, int]]  # (type, count, percent)
    relation_rows: list[tuple[str, int]]  # (category, count)
    total_nodes: int
    total_relations: int


def _percent(count: int, total: int) -> int:
    if total == 0:
        return 0
    return (200 * count + total) // (2 * total)  # integer half-up rounding


def graph_stats(graph: KnowledgeGraph) -> GraphStats:
    node_counts: dict[NodeType, int] = {t: 0 for t in NodeType}
    for node in graph.nodes.values():
        node_counts[node.node_type] += 1
    relation_counts: dict[RelationCategory, int] = {c: 0 for c in RelationCategory}
    for edge in graph.edges:
        relation_counts[edge.category] += 1

    total_nodes = len(graph.nodes)
    node_types = list(CORE_NODE_ROWS) + [
        t for t in NodeType if t not in CORE_NODE_ROWS and node_counts[t] > 0
    ]
    relation_categories = list(CORE_RELATION_ROWS) + [
        c for c in RelationCategory if c not in CORE_RELATION_ROWS and relation_counts[c] > 0
    ]
    return GraphStats(
        node_rows=[
            (t.value, node_counts[t], _percent(node_counts[t], total_nodes)) for t in node_types
        ],
        relation_rows=[(c.value, relation_counts[c]) for c in relation_categories],
        total_nodes=total_nodes,
        total_relations=len(graph.edges),
    )
