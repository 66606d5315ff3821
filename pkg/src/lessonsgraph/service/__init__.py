from .app import (
    ServiceConfig,
    create_app,
    node_payload,
    recommend_payload,
    resolve_search_config,
    result_payload,
    search_payload,
    serve,
    stats_payload,
    subgraph_payload,
)

__all__ = [
    "ServiceConfig",
    "create_app",
    "node_payload",
    "recommend_payload",
    "resolve_search_config",
    "result_payload",
    "search_payload",
    "serve",
    "stats_payload",
    "subgraph_payload",
]
