from .build import (
    build_from_manifest,
    build_graph,
    create_document_nodes,
    insert_linking_nodes,
    link_inter_vector,
    link_intra_fc,
    link_intra_pe,
)
from .io import export_graph, export_graphml, graph_from_dict, graph_to_dict, import_graph
from .model import (
    ALL_CATEGORIES,
    DOCUMENT_TYPES,
    Edge,
    GraphConfig,
    GraphStats,
    KnowledgeGraph,
    LN_CATEGORIES,
    Node,
    NodeType,
    RelationCategory,
    category_for,
    expand_category_tokens,
    graph_stats,
)

__all__ = [
    "ALL_CATEGORIES",
    "DOCUMENT_TYPES",
    "Edge",
    "GraphConfig",
    "GraphStats",
    "KnowledgeGraph",
    "LN_CATEGORIES",
    "Node",
    "NodeType",
    "RelationCategory",
    "build_from_manifest",
    "build_graph",
    "category_for",
    "create_document_nodes",
    "expand_category_tokens",
    "export_graph",
    "export_graphml",
    "graph_from_dict",
    "graph_stats",
    "graph_to_dict",
    "import_graph",
    "insert_linking_nodes",
    "link_inter_vector",
    "link_intra_fc",
    "link_intra_pe",
]
