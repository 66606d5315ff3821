"""Command-line entry point.

Query subcommands (``search``, ``recommend``, ``stats``) are thin clients
over the same payload builders the HTTP service uses, so ``--json`` output is
field-for-field identical to the service's responses. Exit codes: 0 success,
1 domain error (one-line message on stderr), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

from .errors import LessonsGraphError
from .ingest import load_corpus, preprocess_corpus
from .kgraph.build import build_graph
from .kgraph.io import export_graph, export_graphml, import_graph
from .kgraph.model import GraphConfig
from .vectorize import export_model, export_vectors, fit_model
from .metrics import (
    SyntheticSpec,
    generate_synthetic_corpus,
    report_tables,
    visibility_experiment,
)
from .search import SearchConfig
from .service.app import (
    ServiceConfig,
    recommend_payload,
    resolve_search_config,
    search_payload,
    serve,
    stats_payload,
)

CONFIG_ENV_VAR = "LESSONSGRAPH_CONFIG"


def _load_graph_config(path: str | None) -> GraphConfig:
    path = path or os.environ.get(CONFIG_ENV_VAR)
    if not path:
        return GraphConfig()
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise LessonsGraphError(f"cannot read config {path}: {exc}") from None
    try:
        return GraphConfig.from_dict(data)
    except (ValueError, TypeError, KeyError) as exc:
        raise LessonsGraphError(f"bad config {path}: {exc}") from None


def _search_config(args) -> SearchConfig:
    return resolve_search_config(
        SearchConfig(),
        depth=args.depth,
        limit=args.limit,
        result_types=args.types.split(",") if getattr(args, "types", None) else None,
    )


def _print_results(payload: dict) -> None:
    results = payload["results"]
    if not results:
        print("no results")
        return
    id_width = max(len(r["id"]) for r in results)
    for rank, item in enumerate(results, start=1):
        print(
            f"{rank:>4}  {item['score']:.4f}  {item['type']:<4} "
            f"{item['id']:<{id_width}}  {item['label']}"
        )


def _cmd_build(args) -> int:
    config = _load_graph_config(args.config)
    corpus = load_corpus(args.manifest)
    docs, report = preprocess_corpus(corpus)
    model = fit_model(docs)
    graph = build_graph(docs, model, config, corpus.rules)
    export_graph(graph, args.out)
    if args.dump_model:
        export_model(model, args.dump_model)
    if args.dump_vectors:
        export_vectors(docs, model, config.k, args.dump_vectors)
    print(f"graph written to {args.out}: {len(graph.nodes)} nodes, {len(graph.edges)} edges")
    if report.empty_documents:
        print(
            f"note: {len(report.empty_documents)} document(s) reduced to zero sentences: "
            + ", ".join(report.empty_documents),
            file=sys.stderr,
        )
    return 0


def _cmd_search(args) -> int:
    graph = import_graph(args.graph)
    payload = search_payload(graph, args.query, _search_config(args))
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        _print_results(payload)
    return 0


def _cmd_recommend(args) -> int:
    graph = import_graph(args.graph)
    payload = recommend_payload(
        graph,
        _search_config(args),
        element_id=args.element_id,
        element_text=args.element_text,
    )
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        _print_results(payload)
    return 0


def _cmd_stats(args) -> int:
    graph = import_graph(args.graph)
    report = report_tables(graph)
    if args.csv:
        sys.stdout.write(report.to_csv())
    elif args.json:
        print(json.dumps(stats_payload(graph), sort_keys=True))
    else:
        sys.stdout.write(report.to_text())
    return 0


def _cmd_experiment(args) -> int:
    try:
        data = json.loads(Path(args.spec).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise LessonsGraphError(f"cannot read experiment spec {args.spec}: {exc}") from None
    spec = SyntheticSpec.from_dict(data)
    configs = data.get("configs", [["FC_FC"], ["FC_FC", "LN"], ["FC_FC", "LN", "PE_PE"]])
    depths = data.get("depths", [1, 2])
    workdir = data.get("workdir")
    if workdir:
        corpus = generate_synthetic_corpus(spec, workdir)
        report = visibility_experiment(corpus.manifest_path, configs, depths)
    else:
        with tempfile.TemporaryDirectory(prefix="lessonsgraph-exp-") as tmp:
            corpus = generate_synthetic_corpus(spec, tmp)
            report = visibility_experiment(corpus.manifest_path, configs, depths)
    Path(args.out).write_text(report.to_csv(), encoding="utf-8")
    sys.stdout.write(report.to_text())
    print(f"report written to {args.out}")
    return 0


def _cmd_export(args) -> int:
    graph = import_graph(args.graph)
    if args.format == "graphml":
        export_graphml(graph, args.out)
    else:
        export_graph(graph, args.out)
    print(f"{args.format} export written to {args.out}")
    return 0


def _cmd_serve(args) -> int:
    serve(
        ServiceConfig(
            graph_path=args.graph,
            host=args.host,
            port=args.port,
        )
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lessonsgraph",
        description="Build and query a failure-case knowledge graph.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_build = sub.add_parser("build", help="build a graph from a corpus manifest")
    p_build.add_argument("--manifest", required=True)
    p_build.add_argument("--config", help=f"graph config JSON (or ${CONFIG_ENV_VAR})")
    p_build.add_argument("--out", required=True)
    p_build.add_argument("--dump-model", help="also write the fitted TF-IDF model as JSON")
    p_build.add_argument("--dump-vectors", help="also write document vectors as JSON lines")
    p_build.set_defaults(func=_cmd_build)

    p_search = sub.add_parser("search", help="query a built graph")
    p_search.add_argument("--graph", required=True)
    p_search.add_argument("--query", required=True)
    p_search.add_argument("--depth", type=int)
    p_search.add_argument("--limit", type=int)
    p_search.add_argument("--types", help="comma-separated result types, e.g. FC,PE")
    p_search.add_argument("--json", action="store_true", help="emit the service response schema")
    p_search.set_defaults(func=_cmd_search)

    p_rec = sub.add_parser("recommend", help="failure cases for an inserted element")
    p_rec.add_argument("--graph", required=True)
    group = p_rec.add_mutually_exclusive_group(required=True)
    group.add_argument("--element-id")
    group.add_argument("--element-text")
    p_rec.add_argument("--depth", type=int)
    p_rec.add_argument("--limit", type=int)
    p_rec.add_argument("--json", action="store_true")
    p_rec.set_defaults(func=_cmd_recommend, types=None)

    p_stats = sub.add_parser("stats", help="node and relation statistics")
    p_stats.add_argument("--graph", required=True)
    p_stats.add_argument("--csv", action="store_true")
    p_stats.add_argument("--json", action="store_true")
    p_stats.set_defaults(func=_cmd_stats)

    p_exp = sub.add_parser("experiment", help="run the visibility experiment")
    p_exp.add_argument("--spec", required=True, help="experiment spec JSON")
    p_exp.add_argument("--out", required=True, help="CSV report path")
    p_exp.set_defaults(func=_cmd_experiment)

    p_export = sub.add_parser("export", help="re-export a graph")
    p_export.add_argument("--graph", required=True)
    p_export.add_argument("--format", choices=["graphml", "json"], default="graphml")
    p_export.add_argument("--out", required=True)
    p_export.set_defaults(func=_cmd_export)

    p_serve = sub.add_parser("serve", help="serve a graph over HTTP")
    p_serve.add_argument("--graph", required=True)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except LessonsGraphError as exc:
        print(f"error: {exc.message}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
