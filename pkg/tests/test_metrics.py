from __future__ import annotations

from pathlib import Path

import pytest

from lessonsgraph.ingest import load_corpus, preprocess_corpus, porter_stem
from lessonsgraph.kgraph import (
    GraphConfig,
    KnowledgeGraph,
    Node,
    NodeType,
    RelationCategory,
    build_from_manifest,
    expand_category_tokens,
)
from lessonsgraph.metrics import (
    SyntheticSpec,
    fc_queries,
    generate_synthetic_corpus,
    report_tables,
    visibility_experiment,
)
from lessonsgraph.vectorize import DocumentVector, NGram, fit_model

from conftest import doc_of


def tree_bytes(root: Path) -> dict[str, bytes]:
    return {
        str(p.relative_to(root)): p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file()
    }


# --- generator ---------------------------------------------------------------


def test_generator_deterministic(tmp_path):
    spec = SyntheticSpec(seed=1, fc_count=10, pe_count=20, ps_count=2)
    a = generate_synthetic_corpus(spec, tmp_path / "a")
    b = generate_synthetic_corpus(spec, tmp_path / "b")
    assert tree_bytes(tmp_path / "a") == tree_bytes(tmp_path / "b")
    assert a.plants == b.plants


def test_generator_seed_changes_output(tmp_path):
    a = generate_synthetic_corpus(SyntheticSpec(seed=1, fc_count=6, pe_count=8), tmp_path / "a")
    b = generate_synthetic_corpus(SyntheticSpec(seed=2, fc_count=6, pe_count=8), tmp_path / "b")
    assert tree_bytes(tmp_path / "a") != tree_bytes(tmp_path / "b")


def test_generator_words_are_stemmer_fixpoints(tmp_path):
    corpus_info = generate_synthetic_corpus(
        SyntheticSpec(seed=3, fc_count=6, pe_count=10, ps_count=1), tmp_path
    )
    corpus = load_corpus(corpus_info.manifest_path)
    docs, _ = preprocess_corpus(corpus)
    for doc in docs:
        for term in doc.terms():
            if term.isalpha():
                assert porter_stem(term) == term


def test_zero_trigram_probability_yields_no_fc_fc_edges(tmp_path):
    spec = SyntheticSpec(seed=5, fc_count=10, pe_count=10, trigram_pair_prob=0.0,
                         bridge_pair_prob=0.3, fc_pe_link_prob=0.2)
    corpus_info = generate_synthetic_corpus(spec, tmp_path)
    graph, _ = build_from_manifest(corpus_info.manifest_path)
    assert not any(e.category is RelationCategory.FC_FC for e in graph.edges)


def test_full_trigram_probability_connects_every_fc_pair(tmp_path):
    spec = SyntheticSpec(seed=6, fc_count=5, pe_count=5, trigram_pair_prob=1.0,
                         bridge_pair_prob=0.0, fc_pe_link_prob=0.0)
    corpus_info = generate_synthetic_corpus(spec, tmp_path)
    graph, _ = build_from_manifest(corpus_info.manifest_path)
    fc_fc = [e for e in graph.edges if e.category is RelationCategory.FC_FC]
    assert len(fc_fc) == 5 * 4 // 2


def test_bridge_pairs_share_exactly_one_unigram(tmp_path):
    spec = SyntheticSpec(seed=7, fc_count=8, pe_count=6, trigram_pair_prob=0.0,
                         bridge_pair_prob=1.0, fc_pe_link_prob=0.0)
    corpus_info = generate_synthetic_corpus(spec, tmp_path)
    corpus = load_corpus(corpus_info.manifest_path)
    docs, _ = preprocess_corpus(corpus)
    by_id = {d.id: set(d.terms()) for d in docs}
    for key, bridge in corpus_info.plants["bridge_terms"].items():
        a, b = key.split("|")
        assert bridge in by_id[a] and bridge in by_id[b]


def test_spec_validation():
    with pytest.raises(ValueError):
        SyntheticSpec(fc_count=0)
    with pytest.raises(ValueError):
        SyntheticSpec(trigram_pair_prob=1.5)
    with pytest.raises(ValueError):
        SyntheticSpec(vocabulary_size=3)


# --- queries -----------------------------------------------------------------


def test_fc_queries_one_per_failure_case(tmp_path):
    corpus_info = generate_synthetic_corpus(SyntheticSpec(seed=9, fc_count=7, pe_count=5), tmp_path)
    corpus = load_corpus(corpus_info.manifest_path)
    docs, _ = preprocess_corpus(corpus)
    model = fit_model(docs)
    queries = fc_queries(docs, model, 20)
    fc_docs = [d for d in docs if d.id.startswith("fc")]
    assert len(queries) == len(fc_docs) == 7
    by_id = {d.id: d for d in docs}
    for doc_id, query in queries:
        own_terms = set(by_id[doc_id].terms())
        assert set(query.split()) <= own_terms  # queries derive from the doc itself


# --- visibility experiment ----------------------------------------------------


@pytest.fixture(scope="module")
def experiment_corpus(tmp_path_factory):
    root = tmp_path_factory.mktemp("experiment")
    spec = SyntheticSpec(seed=11, fc_count=14, pe_count=30, ps_count=4,
                         trigram_pair_prob=0.1, bridge_pair_prob=0.25, fc_pe_link_prob=0.3)
    return generate_synthetic_corpus(spec, root)


CONFIG_CHAIN = [["FC_FC"], ["FC_FC", "LN"], ["FC_FC", "LN", "PE_PE"]]


def test_visibility_gains_non_negative_and_positive_at_depth_one(experiment_corpus):
    report = visibility_experiment(experiment_corpus.manifest_path, CONFIG_CHAIN, [1, 2])
    for cell in report.cells:
        if cell.gain_percent is not None:
            assert cell.gain_percent >= 0.0
    ln_depth1 = [
        c for c in report.cells if c.config_label == "FC_FC+LN" and c.depth == 1
    ][0]
    assert ln_depth1.gain_percent is not None and ln_depth1.gain_percent > 0.0


def test_visibility_requires_baseline(experiment_corpus):
    with pytest.raises(ValueError):
        visibility_experiment(experiment_corpus.manifest_path, [["FC_FC", "LN"]], [1])


def test_visibility_depth_counts_non_decreasing(experiment_corpus):
    report = visibility_experiment(experiment_corpus.manifest_path, CONFIG_CHAIN, [1, 2])
    by_config: dict[str, dict[int, float]] = {}
    for cell in report.cells:
        by_config.setdefault(cell.config_label, {})[cell.depth] = cell.mean_unique_fc
    for depths in by_config.values():
        assert depths[2] >= depths[1]


def test_visibility_report_deterministic(experiment_corpus):
    a = visibility_experiment(experiment_corpus.manifest_path, CONFIG_CHAIN, [1])
    b = visibility_experiment(experiment_corpus.manifest_path, CONFIG_CHAIN, [1])
    assert a.to_csv() == b.to_csv()


def test_visibility_csv_shape(experiment_corpus):
    report = visibility_experiment(experiment_corpus.manifest_path, CONFIG_CHAIN, [1])
    lines = report.to_csv().strip().splitlines()
    assert lines[0] == "config,depth,queries,mean_unique_fc,total_relations,gain_percent"
    assert len(lines) == 1 + len(CONFIG_CHAIN)
    for line in lines[1:]:
        assert len(line.split(",")) == 6


# --- report tables -------------------------------------------------------------


def small_graph():
    from lessonsgraph.ingest import default_rules

    graph = KnowledgeGraph(GraphConfig(), default_rules(), fit_model([doc_of("s", [["s"]])]))
    for fc in ("f1", "f2"):
        graph.add_node(Node(fc, NodeType.FC, fc, DocumentVector(fc, {}, 20)))
    graph.add_node(Node("p1", NodeType.PE, "p1", DocumentVector("p1", {}, 20)))
    graph.add_node(
        Node("ln:1:x", NodeType.LN, "x", NGram(("x",), 1, frozenset({"f1", "p1"})))
    )
    graph.add_edge("f1", "ln:1:x", RelationCategory.FC_LN, 1 / 3)
    graph.add_edge("p1", "ln:1:x", RelationCategory.PE_LN, 1 / 3)
    return graph


def test_report_tables_counts_and_percents():
    report = report_tables(small_graph())
    csv_lines = report.to_csv().strip().splitlines()
    assert csv_lines[0] == "section,category,count,percent"
    assert "nodes,FC,2,50" in csv_lines
    assert "nodes,LN,1,25" in csv_lines
    assert "nodes,PE,1,25" in csv_lines
    assert "relations,FC-LN,1," in csv_lines
    assert "relations,PE-LN,1," in csv_lines


def test_report_tables_percentages_sum_bound():
    report = report_tables(small_graph())
    total = sum(percent for _, _, percent in report.stats.node_rows)
    assert abs(total - 100) <= 1


def test_report_tables_exact_paper_categories_without_ps(fixture_docs, fixture_model, fixture_corpus):
    from lessonsgraph.kgraph import build_graph

    docs = [d for d in fixture_docs if d.source_type.value != "product_spec"]
    config = GraphConfig(enabled_relation_categories=expand_category_tokens(["FC_FC", "LN", "PE_PE"]))
    graph = build_graph(docs, fixture_model, config, fixture_corpus.rules)
    report = report_tables(graph)
    assert [row[0] for row in report.stats.node_rows] == ["FC", "LN", "PE"]
    assert [row[0] for row in report.stats.relation_rows] == ["FC_FC", "PE_PE", "PE_LN", "FC_LN"]


def test_report_tables_empty_graph_all_zero():
    from lessonsgraph.ingest import default_rules

    graph = KnowledgeGraph(GraphConfig(), default_rules(), fit_model([doc_of("s", [["s"]])]))
    report = report_tables(graph)
    assert all(count == 0 and percent == 0 for _, count, percent in report.stats.node_rows)
    text = report.to_text()
    assert "FC" in text and "0%" in text
