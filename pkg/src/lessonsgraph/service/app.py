"""Read-only HTTP service over a built knowledge graph.

The graph loads once at startup and is never mutated afterwards, so any
number of requests may run concurrently; every response is a deterministic
function of (graph file, request). The payload builders live here so the CLI
can emit byte-for-byte the same JSON without going through HTTP.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

from fastapi import FastAPI, Query
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import EmptyQuery, LessonsGraphError, UnknownElement, UnknownNode
from ..kgraph.io import _payload_to_dict, import_graph
from ..kgraph.model import KnowledgeGraph, NodeType, graph_stats
from ..search import ScoredNode, SearchConfig, recommend, search, subgraph_slice
from . import schemas

_STATUS_BY_CODE = {
    EmptyQuery.code: 422,
    UnknownElement.code: 404,
    UnknownNode.code: 404,
}


@dataclass
class ServiceConfig:
    graph_path: str | Path
    host: str = "127.0.0.1"
    port: int = 8000
    default_search: SearchConfig = field(default_factory=SearchConfig)
    cors_origins: list[str] = field(default_factory=lambda: ["*"])


def resolve_search_config(
    default: SearchConfig,
    depth: int | None = None,
    limit: int | None = None,
    result_types: Sequence[str] | None = None,
) -> SearchConfig:
    overrides = {}
    if depth is not None:
        overrides["depth"] = depth
    if limit is not None:
        overrides["limit"] = limit
    if result_types is not None:
        overrides["result_types"] = frozenset(NodeType(t) for t in result_types)
    return replace(default, **overrides) if overrides else default


def result_payload(results: Sequence[ScoredNode], graph: KnowledgeGraph) -> dict:
    return {
        "results": [
            {
                "id": node.node_id,
                "label": graph.nodes[node.node_id].label,
                "type": graph.nodes[node.node_id].node_type.value,
                "score": node.score,
                "base": node.base,
                "path": [
                    {"category": category.value, "weight": weight}
                    for category, weight in node.best_path
                ],
            }
            for node in results
        ]
    }


def search_payload(graph: KnowledgeGraph, raw_query: str, config: SearchConfig) -> dict:
    return result_payload(search(graph, raw_query, config), graph)


def recommend_payload(
    graph: KnowledgeGraph,
    config: SearchConfig,
    element_id: str | None = None,
    element_text: str | None = None,
) -> dict:
    results = recommend(graph, element_id=element_id, element_text=element_text, config=config)
    return result_payload(results, graph)


def stats_payload(graph: KnowledgeGraph) -> dict:
    stats = graph_stats(graph)
    return {
        "total_nodes": stats.total_nodes,
        "total_relations": stats.total_relations,
        "nodes": [
            {"type": t, "count": count, "percent": percent}
            for t, count, percent in stats.node_rows
        ],
        "relations": [{"category": c, "count": count} for c, count in stats.relation_rows],
    }


def node_payload(graph: KnowledgeGraph, node_id: str) -> dict:
    node = graph.nodes.get(node_id)
    if node is None:
        raise UnknownNode(node_id)
    return {
        "id": node.id,
        "type": node.node_type.value,
        "label": node.label,
        "payload": _payload_to_dict(node),
        "structure_parent": node.structure_parent,
        "degree": len(graph.neighbors(node_id)),
    }


def subgraph_payload(graph: KnowledgeGraph, node_id: str, radius: int) -> dict:
    node_ids, edge_indexes = subgraph_slice(graph, node_id, radius)
    return {
        "nodes": [
            {
                "id": nid,
                "type": graph.nodes[nid].node_type.value,
                "label": graph.nodes[nid].label,
            }
            for nid in node_ids
        ],
        "edges": [
            {
                "a": graph.edges[i].a,
                "b": graph.edges[i].b,
                "category": graph.edges[i].category.value,
                "weight": graph.edges[i].weight,
            }
            for i in edge_indexes
        ],
    }


def create_app(
    graph: KnowledgeGraph,
    default_search: SearchConfig | None = None,
    cors_origins: Sequence[str] | None = None,
) -> FastAPI:
    default = default_search or SearchConfig()
    app = FastAPI(title="lessonsgraph", version=__version__)

    if cors_origins:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=list(cors_origins),
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(LessonsGraphError)
    async def _domain_error(_, exc: LessonsGraphError):
        status = _STATUS_BY_CODE.get(exc.code, 400)
        return JSONResponse(status_code=status, content={"code": exc.code, "message": exc.message})

    @app.exception_handler(RequestValidationError)
    async def _validation_error(_, exc: RequestValidationError):
        return JSONResponse(
            status_code=422, content={"code": "INVALID_REQUEST", "message": str(exc.errors())}
        )

    @app.post("/search", response_model=schemas.SearchResponse)
    def post_search(request: schemas.SearchRequest):
        config = resolve_search_config(default, request.depth, request.limit, request.result_types)
        return search_payload(graph, request.query, config)

    @app.post("/recommend", response_model=schemas.SearchResponse)
    def post_recommend(request: schemas.RecommendRequest):
        config = resolve_search_config(default, request.depth, request.limit)
        return recommend_payload(
            graph, config, element_id=request.element_id, element_text=request.element_text
        )

    @app.get("/stats", response_model=schemas.StatsResponse)
    def get_stats():
        return stats_payload(graph)

    @app.get("/nodes/{node_id}", response_model=schemas.NodeDetail)
    def get_node(node_id: str):
        return node_payload(graph, node_id)

    @app.get("/subgraph", response_model=schemas.SubgraphResponse)
    def get_subgraph(node: str, radius: int = Query(default=1, ge=0, le=2)):
        return subgraph_payload(graph, node, radius)

    return app


def serve(config: ServiceConfig) -> None:
    """Load the graph and block serving it; refuses to start on a bad graph."""
    import uvicorn

    graph = import_graph(config.graph_path)
    app = create_app(graph, config.default_search, config.cors_origins)
    uvicorn.run(app, host=config.host, port=config.port)
