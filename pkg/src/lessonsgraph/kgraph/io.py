"""Graph persistence: canonical JSON with a schema version, plus GraphML.

The JSON export is canonical (sorted nodes, edges and keys) so identical
graphs always serialize to identical bytes, and export(import(export(g)))
round-trips bit-for-bit. The file embeds the preprocessing rules and the
fitted TF-IDF model so a loaded graph can parse queries on its own.
"""

from __future__ import annotations

import json
from pathlib import Path
from xml.etree import ElementTree

from ..errors import CorruptFile, SchemaVersionMismatch
from ..ingest.rules import DomainRules
from ..vectorize import DocumentVector, NGram, TfidfModel
from .model import GraphConfig, KnowledgeGraph, Node, NodeType, RelationCategory

SCHEMA_VERSION = 1


def _payload_to_dict(node: Node) -> dict:
    if node.node_type is NodeType.LN:
        ngram: NGram = node.payload
        return {
            "kind": "ngram",
            "terms": list(ngram.terms),
            "n": ngram.n,
            "postings": sorted(ngram.postings),
            "df": ngram.df,
        }
    vector: DocumentVector = node.payload
    return {
        "kind": "vector",
        "doc_id": vector.doc_id,
        "capacity": vector.capacity,
        "entries": dict(sorted(vector.entries.items())),
    }


def _payload_from_dict(data: dict) -> DocumentVector | NGram:
    if data["kind"] == "ngram":
        return NGram(terms=tuple(data["terms"]), n=int(data["n"]), postings=frozenset(data["postings"]))
    return DocumentVector(
        doc_id=data["doc_id"],
        entries={str(t): float(w) for t, w in data["entries"].items()},
        capacity=int(data["capacity"]),
    )


def graph_to_dict(graph: KnowledgeGraph) -> dict:
    nodes = []
    for node_id in sorted(graph.nodes):
        node = graph.nodes[node_id]
        entry = {
            "id": node.id,
            "type": node.node_type.value,
            "label": node.label,
            "payload": _payload_to_dict(node),
        }
        if node.structure_parent is not None:
            entry["structure_parent"] = node.structure_parent
        nodes.append(entry)
    edges = []
    for edge in sorted(graph.edges, key=lambda e: (e.a, e.b, e.category.value)):
        entry = {
            "a": edge.a,
            "b": edge.b,
            "category": edge.category.value,
            "weight": edge.weight,
        }
        if edge.direction_meta is not None:
            entry["direction_meta"] = list(edge.direction_meta)
        edges.append(entry)
    return {
        "version": SCHEMA_VERSION,
        "config": graph.config.to_dict(),
        "rules": graph.rules.to_dict(),
        "model": graph.model.to_dict(),
        "nodes": nodes,
        "edges": edges,
    }


def export_graph(graph: KnowledgeGraph, path: str | Path) -> None:
    payload = json.dumps(graph_to_dict(graph), sort_keys=True, separators=(",", ":"))
    Path(path).write_text(payload + "\n", encoding="utf-8")


def graph_from_dict(data: dict) -> KnowledgeGraph:
    version = data.get("version")
    if version != SCHEMA_VERSION:
        raise SchemaVersionMismatch(version)
    graph = KnowledgeGraph(
        config=GraphConfig.from_dict(data["config"]),
        rules=DomainRules.from_dict(data["rules"]),
        model=TfidfModel.from_dict(data["model"]),
    )
    for entry in data["nodes"]:
        graph.add_node(
            Node(
                id=entry["id"],
                node_type=NodeType(entry["type"]),
                label=entry["label"],
                payload=_payload_from_dict(entry["payload"]),
                structure_parent=entry.get("structure_parent"),
            )
        )
    for entry in data["edges"]:
        meta = entry.get("direction_meta")
        graph.add_edge(
            entry["a"],
            entry["b"],
            RelationCategory(entry["category"]),
            float(entry["weight"]),
            direction_meta=tuple(meta) if meta else None,
        )
    return graph


def import_graph(path: str | Path) -> KnowledgeGraph:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise
    except (OSError, UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CorruptFile(str(path), str(exc)) from exc
    if not isinstance(data, dict):
        raise CorruptFile(str(path), "top-level value is not an object")
    if data.get("version") != SCHEMA_VERSION:
        raise SchemaVersionMismatch(data.get("version"))
    try:
        return graph_from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptFile(str(path), f"bad graph structure: {exc}") from exc


def export_graphml(graph: KnowledgeGraph, path: str | Path) -> None:
    """GraphML rendering for third-party viewers; node type is an attribute."""
    root = ElementTree.Element("graphml", xmlns="http://graphml.graphdrawing.org/xmlns")
    keys = [
        ("d_type", "node", "type", "string"),
        ("d_label", "node", "label", "string"),
        ("d_category", "edge", "category", "string"),
        ("d_weight", "edge", "weight", "double"),
    ]
    for key_id, domain, name, kind in keys:
        ElementTree.SubElement(
            root, "key", id=key_id, attrib={"for": domain, "attr.name": name, "attr.type": kind}
        )
    graph_el = ElementTree.SubElement(root, "graph", id="lessonsgraph", edgedefault="undirected")
    for node_id in sorted(graph.nodes):
        node = graph.nodes[node_id]
        node_el = ElementTree.SubElement(graph_el, "node", id=node.id)
        ElementTree.SubElement(node_el, "data", key="d_type").text = node.node_type.value
        ElementTree.SubElement(node_el, "data", key="d_label").text = node.label
    for i, edge in enumerate(sorted(graph.edges, key=lambda e: (e.a, e.b, e.category.value))):
        edge_el = ElementTree.SubElement(
            graph_el, "edge", id=f"e{i}", source=edge.a, target=edge.b
        )
        ElementTree.SubElement(edge_el, "data", key="d_category").text = edge.category.value
        ElementTree.SubElement(edge_el, "data", key="d_weight").text = repr(edge.weight)
    tree = ElementTree.ElementTree(root)
    ElementTree.indent(tree)
    tree.write(path, encoding="unicode", xml_declaration=True)
