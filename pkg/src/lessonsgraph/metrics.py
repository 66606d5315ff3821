"""Desk-scale experiments: synthetic corpora, visibility gains, stats tables.

The generator plants controlled pattern sharing into an artificial corpus:
strong FC pairs share a whole trigram (enough pattern mass for a direct
FC-FC edge), weak FC pairs share exactly one rare unigram (not enough mass
for an edge, so only a linking node can connect them), and some failure
cases share a trigram with a project element. The visibility experiment then
measures how many unique failure cases each query reaches as relation
categories are switched on, mirroring the gain-over-baseline comparison the
graph construction is designed around.

Generated words are built so the stemmer leaves them untouched, which keeps
planted surface patterns identical to their normalized forms.
"""

from __future__ import annotations

import json
import random
import statistics
from dataclasses import dataclass, field, replace
from pathlib import Path

from .ingest.corpus import SourceType, load_corpus
from .ingest.pipeline import TokenizedDocument, preprocess_corpus
from .ingest.stopwords import DEFAULT_STOPWORDS
from .kgraph.build import build_graph
from .kgraph.model import (
    GraphConfig,
    GraphStats,
    KnowledgeGraph,
    NodeType,
    RelationCategory,
    expand_category_tokens,
    graph_stats,
)
from .search import SearchConfig, search
from .vectorize import document_vector, fit_model

_CONSONANTS = "bcdfgklmnprstvz"
_VOWELS = "aeiou"
_FINAL_VOWELS = "aou"  # endings the stemmer never rewrites


@dataclass
class SyntheticSpec:
    seed: int = 0
    fc_count: int = 12
    pe_count: int = 30
    ps_count: int = 0
    vocabulary_size: int = 120
    trigram_pair_prob: float = 0.08
    bridge_pair_prob: float = 0.12
    fc_pe_link_prob: float = 0.25

    def __post_init__(self):
        if self.fc_count < 1 or self.pe_count < 1 or self.ps_count < 0:
            raise ValueError("need at least one failure case and one project element")
        if self.vocabulary_size < 10:
            raise ValueError("vocabulary_size must be >= 10")
        for name in ("trigram_pair_prob", "bridge_pair_prob", "fc_pe_link_prob"):
            if not 0 <= getattr(self, name) <= 1:
                raise ValueError(f"{name} must be in [0, 1]")

    @classmethod
    def from_dict(cls, data: dict) -> "SyntheticSpec":
        known = {f for f in cls.__dataclass_fields__}
        return cls(**{k: v for k, v in data.items() if k in known})


@dataclass
class SyntheticCorpus:
    manifest_path: Path
    plants: dict


class _WordMaker:
    def __init__(self, rng: random.Random):
        self.rng = rng
        self.used: set[str] = set()

    def fresh(self) -> str:
        while True:
            syllables = self.rng.randint(2, 3)
            parts = []
            for s in range(syllables):
                consonant = self.rng.choice(_CONSONANTS)
                vowels = _FINAL_VOWELS if s == syllables - 1 else _VOWELS
                parts.append(consonant + self.rng.choice(vowels))
            word = "".join(parts)
            if word not in self.used and word not in DEFAULT_STOPWORDS:
                self.used.add(word)
                return word


def generate_synthetic_corpus(spec: SyntheticSpec, out_dir: str | Path) -> SyntheticCorpus:
    """Write a corpus (documents, rules, manifest) deterministically from the seed."""
    out_dir = Path(out_dir)
    docs_dir = out_dir / "docs"
    docs_dir.mkdir(parents=True, exist_ok=True)
    rng = random.Random(spec.seed)
    words = _WordMaker(rng)

    pe_pool = [words.fresh() for _ in range(max(10, spec.vocabulary_size // 2))]
    ps_pool = [words.fresh() for _ in range(max(10, spec.vocabulary_size - len(pe_pool)))]

    fc_ids = [f"fc{i:03d}" for i in range(spec.fc_count)]
    pe_ids = [f"pe{i:03d}" for i in range(spec.pe_count)]

    # Per-FC topic material: the topic term repeats three times and the
    # secondary term twice, so they always head the document vector.
    topic = {i: words.fresh() for i in range(spec.fc_count)}
    secondary = {i: words.fresh() for i in range(spec.fc_count)}
    fc_sentences: dict[int, list[str]] = {}
    for i in range(spec.fc_count):
        fillers = [words.fresh() for _ in range(4)]
        fc_sentences[i] = [
            f"{topic[i]} {fillers[0]} {fillers[1]} {topic[i]}",
            f"{secondary[i]} {topic[i]} {fillers[2]}",
            f"{fillers[3]} {secondary[i]}",
        ]

    pe_extra: dict[int, list[str]] = {i: [] for i in range(spec.pe_count)}
    plants = {
        "trigram_pairs": [],
        "bridge_pairs": [],
        "fc_pe_links": [],
        "bridge_terms": {},
        "fc_pe_terms": {},
    }

    for i in range(spec.fc_count):
        for j in range(i + 1, spec.fc_count):
            if rng.random() < spec.trigram_pair_prob:
                trigram = f"{words.fresh()} {words.fresh()} {words.fresh()}"
                fc_sentences[i].append(trigram)
                fc_sentences[j].append(trigram)
                plants["trigram_pairs"].append([fc_ids[i], fc_ids[j]])
            if rng.random() < spec.bridge_pair_prob:
                bridge = words.fresh()
                fc_sentences[i].append(f"{bridge} {words.fresh()}")
                fc_sentences[j].append(f"{bridge} {words.fresh()}")
                plants["bridge_pairs"].append([fc_ids[i], fc_ids[j]])
                plants["bridge_terms"][f"{fc_ids[i]}|{fc_ids[j]}"] = bridge

    for i in range(spec.fc_count):
        if rng.random() < spec.fc_pe_link_prob:
            target = rng.randrange(spec.pe_count)
            trigram = f"{words.fresh()} {words.fresh()} {words.fresh()}"
            fc_sentences[i].append(trigram)
            pe_extra[target].append(trigram)
            plants["fc_pe_links"].append([fc_ids[i], pe_ids[target]])
            plants["fc_pe_terms"][f"{fc_ids[i]}|{pe_ids[target]}"] = trigram

    manifest_docs = []
    for i, fc_id in enumerate(fc_ids):
        path = docs_dir / f"{fc_id}.txt"
        path.write_text(". ".join(fc_sentences[i]) + ".\n", encoding="utf-8")
        manifest_docs.append(
            {"id": fc_id, "type": "failure_case", "format": "plain_text", "path": f"docs/{fc_id}.txt"}
        )

    # Element tree: node 0 is the root; every later node hangs off an earlier one.
    parents = {i: rng.randrange(i) for i in range(1, spec.pe_count)}
    element_nodes = {}
    for i in range(spec.pe_count):
        description_sentences = [
            " ".join(rng.choice(pe_pool) for _ in range(5)) for _ in range(2)
        ] + pe_extra[i]
        element_nodes[i] = {
            "id": pe_ids[i],
            "name": f"{words.fresh()} module",
            "description": ". ".join(description_sentences),
            "children": [],
        }
    for i in range(1, spec.pe_count):
        element_nodes[parents[i]]["children"].append(element_nodes[i])
    tree_path = docs_dir / "elements.json"
    tree_path.write_text(json.dumps(element_nodes[0], indent=1, sort_keys=True), encoding="utf-8")
    manifest_docs.append(
        {
            "id": "elements",
            "type": "project_element",
            "format": "element_tree",
            "path": "docs/elements.json",
        }
    )

    for i in range(spec.ps_count):
        ps_id = f"ps{i:03d}"
        rows = ["label\ttext"]
        for label in ("overview", "power", "timing"):
            rows.append(label + "\t" + " ".join(rng.choice(ps_pool) for _ in range(6)))
        path = docs_dir / f"{ps_id}.tsv"
        path.write_text("\n".join(rows) + "\n", encoding="utf-8")
        manifest_docs.append(
            {"id": ps_id, "type": "product_spec", "format": "labeled_table", "path": f"docs/{ps_id}.tsv"}
        )

    rules_path = out_dir / "rules.json"
    rules_path.write_text(
        json.dumps(
            {"abbreviations": {}, "symbol_patterns": [], "autogen_patterns": []}, sort_keys=True
        )
        + "\n",
        encoding="utf-8",
    )
    manifest_path = out_dir / "manifest.json"
    manifest_path.write_text(
        json.dumps({"rules": "rules.json", "documents": manifest_docs}, indent=1, sort_keys=True)
        + "\n",
        encoding="utf-8",
    )
    (out_dir / "plants.json").write_text(
        json.dumps(plants, indent=1, sort_keys=True) + "\n", encoding="utf-8"
    )
    return SyntheticCorpus(manifest_path=manifest_path, plants=plants)


def fc_queries(docs: list[TokenizedDocument], model, k: int) -> list[tuple[str, str]]:
    """One query per failure case: its top-two vector terms, space-joined."""
    queries = []
    for doc in docs:
        if doc.source_type is not SourceType.FAILURE_CASE:
            continue
        vector = document_vector(doc, model, k)
        terms = list(vector.entries)[:2]
        if terms:
            queries.append((doc.id, " ".join(terms)))
    return queries


@dataclass
class VisibilityCell:
    config_label: str
    depth: int
    query_count: int
    mean_unique_fc: float
    total_relations: int
    gain_percent: float | None


@dataclass
class VisibilityReport:
    baseline_label: str
    cells: list[VisibilityCell] = field(default_factory=list)

    CSV_HEADER = "config,depth,queries,mean_unique_fc,total_relations,gain_percent"

    def to_csv(self) -> str:
        lines = [self.CSV_HEADER]
        for cell in self.cells:
            gain = "undefined" if cell.gain_percent is None else f"{cell.gain_percent:.2f}"
            lines.append(
                f"{cell.config_label},{cell.depth},{cell.query_count},"
                f"{cell.mean_unique_fc:.6f},{cell.total_relations},{gain}"
            )
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        header = f"{'config':<24} {'depth':>5} {'mean FC':>10} {'relations':>10} {'gain %':>8}"
        lines = [header, "-" * len(header)]
        for cell in self.cells:
            gain = "undef" if cell.gain_percent is None else f"{cell.gain_percent:+.1f}"
            lines.append(
                f"{cell.config_label:<24} {cell.depth:>5} {cell.mean_unique_fc:>10.3f} "
                f"{cell.total_relations:>10} {gain:>8}"
            )
        return "\n".join(lines) + "\n"


def visibility_experiment(
    manifest_path: str | Path,
    configs: list[list[str]],
    depths: list[int],
    base_config: GraphConfig | None = None,
    min_score: float = 0.01,
) -> VisibilityReport:
    """Build one graph per relation-category set and measure FC visibility.

    Counts unique failure cases retrieved per query (one query per FC
    document) and reports each configuration's gain over the FC_FC-only
    baseline at the same depth. No result limit is applied so counts reflect
    reachability, not truncation.
    """
    base_config = base_config or GraphConfig()
    labels = ["+".join(tokens) for tokens in configs]
    expanded = [expand_category_tokens(tokens) for tokens in configs]
    baseline_index = next(
        (i for i, cats in enumerate(expanded) if cats == frozenset({RelationCategory.FC_FC})),
        None,
    )
    if baseline_index is None:
        raise ValueError("the FC_FC-only baseline config must be included")

    corpus = load_corpus(manifest_path)
    docs, _ = preprocess_corpus(corpus)
    model = fit_model(docs)
    queries = fc_queries(docs, model, base_config.k)

    counts: dict[tuple[int, int], list[int]] = {}
    relations: dict[int, int] = {}
    for ci, categories in enumerate(expanded):
        graph = build_graph(
            docs, model, replace(base_config, enabled_relation_categories=categories), corpus.rules
        )
        relations[ci] = len(graph.edges)
        for depth in depths:
            config = SearchConfig(
                depth=depth,
                result_types=frozenset({NodeType.FC}),
                limit=10**9,
                min_score=min_score,
            )
            counts[(ci, depth)] = [
                len(search(graph, query, config)) for _, query in queries
            ]

    report = VisibilityReport(baseline_label=labels[baseline_index])
    for ci, label in enumerate(labels):
        for depth in depths:
            mean = statistics.fmean(counts[(ci, depth)]) if queries else 0.0
            base_mean = statistics.fmean(counts[(baseline_index, depth)]) if queries else 0.0
            gain = None if base_mean == 0 else 100.0 * (mean - base_mean) / base_mean
            report.cells.append(
                VisibilityCell(
                    config_label=label,
                    depth=depth,
                    query_count=len(queries),
                    mean_unique_fc=mean,
                    total_relations=relations[ci],
                    gain_percent=gain,
                )
            )
    return report


@dataclass
class TableReport:
    stats: GraphStats

    CSV_HEADER = "section,category,count,percent"

    def to_csv(self) -> str:
        lines = [self.CSV_HEADER]
        for node_type, count, percent in self.stats.node_rows:
            lines.append(f"nodes,{node_type},{count},{percent}")
        for category, count in self.stats.relation_rows:
            lines.append(f"relations,{category.replace('_', '-')},{count},")
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        lines = [f"{'Node type':<12} {'Count':>8} {'Percent':>8}"]
        for node_type, count, percent in self.stats.node_rows:
            lines.append(f"{node_type:<12} {count:>8} {percent:>7}%")
        lines.append("")
        lines.append(f"{'Relation':<12} {'Count':>8}")
        for category, count in self.stats.relation_rows:
            lines.append(f"{category.replace('_', '-'):<12} {count:>8}")
        return "\n".join(lines) + "\n"


def report_tables(graph: KnowledgeGraph) -> TableReport:
    return TableReport(stats=graph_stats(graph))
