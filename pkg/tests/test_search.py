from __future__ import annotations

import random

import pytest

from lessonsgraph.errors import EmptyQuery, UnknownElement, UnknownNode
from lessonsgraph.ingest import default_rules
from lessonsgraph.kgraph import (
    GraphConfig,
    KnowledgeGraph,
    Node,
    NodeType,
    RelationCategory,
    build_graph,
    expand_category_tokens,
)
from lessonsgraph.search import (
    ScoredNode,
    SearchConfig,
    expand,
    match_base_nodes,
    parse_query,
    reachable_within,
    recommend,
    search,
    subgraph_slice,
)
from lessonsgraph.vectorize import DocumentVector, NGram, fit_model

from conftest import doc_of

RULES = default_rules()


def graph_of(docs, lns=(), doc_edges=(), config=None):
    """Hand-built graph: docs = (id, type, entries[, parent]), lns = (terms, [(doc, weight)...])."""
    model = fit_model([doc_of("seed", [["seed"]])])
    graph = KnowledgeGraph(config or GraphConfig(), RULES, model)
    for spec in docs:
        node_id, node_type, entries = spec[0], spec[1], spec[2]
        parent = spec[3] if len(spec) > 3 else None
        graph.add_node(
            Node(
                id=node_id,
                node_type=node_type,
                label=node_id,
                payload=DocumentVector(node_id, dict(entries), 20),
                structure_parent=parent,
            )
        )
    for terms, attachments in lns:
        ln_id = f"ln:{len(terms)}:{' '.join(terms)}"
        graph.add_node(
            Node(
                id=ln_id,
                node_type=NodeType.LN,
                label=" ".join(terms),
                payload=NGram(tuple(terms), len(terms), frozenset(d for d, _ in attachments)),
            )
        )
        for doc_id, weight in attachments:
            category = {
                NodeType.FC: RelationCategory.FC_LN,
                NodeType.PE: RelationCategory.PE_LN,
                NodeType.PS: RelationCategory.PS_LN,
            }[graph.nodes[doc_id].node_type]
            graph.add_edge(doc_id, ln_id, category, weight)
    for a, b, category, weight in doc_edges:
        graph.add_edge(a, b, category, weight)
    return graph


# --- parse_query -----------------------------------------------------------


def test_parse_query_terms_and_ngrams(fixture_graph):
    query = parse_query("oscillator failure", fixture_graph.rules, fixture_graph.model)
    assert query.tokens == ["oscil", "failur"]
    assert {g for g in query.ngrams if len(g) == 2} == {("oscil", "failur")}
    assert {g for g in query.ngrams if len(g) == 1} == {("oscil",), ("failur",)}


def test_parse_query_all_stopwords(fixture_graph):
    with pytest.raises(EmptyQuery):
        parse_query("the of and", fixture_graph.rules, fixture_graph.model)


def test_parse_query_symbol_split(fixture_graph):
    query = parse_query("VDD__CORE", fixture_graph.rules, fixture_graph.model)
    assert query.tokens == ["vdd", "core"]


def test_parse_query_vector_uses_idf(fixture_graph):
    query = parse_query("crystal oscillator", fixture_graph.rules, fixture_graph.model)
    for term, weight in query.vector.items():
        assert weight == fixture_graph.model.idf[term]
    assert "crystal" in query.vector


def test_parse_query_oov_terms_excluded_from_vector(fixture_graph):
    query = parse_query("crystal zzzunknownzzz", fixture_graph.rules, fixture_graph.model)
    assert "zzzunknownzzz" in query.tokens
    assert "zzzunknownzzz" not in query.vector


# --- match_base_nodes ------------------------------------------------------


def test_base_match_cosine_identity():
    docs = [doc_of("d1", [["alpha", "beta"]]), doc_of("d2", [["gamma", "delta"]])]
    model = fit_model(docs)
    graph = build_graph(docs, model, GraphConfig(), RULES)
    query = parse_query("alpha beta", RULES, model)
    base = {b.node_id: b for b in match_base_nodes(graph, query)}
    # query idf vector is parallel to d1's tf-idf vector (all tf = 1)
    assert base["d1"].score == 1.0
    assert base["d1"].base is True


def test_base_match_trigram_ln_promotes_postings():
    graph = graph_of(
        docs=[("fc7", NodeType.FC, {}), ("fc8", NodeType.FC, {})],
        lns=[(("a", "b", "c"), [("fc7", 1.0), ("fc8", 1.0)])],
    )
    query = type("Q", (), {"vector": {}, "ngrams": {("a", "b", "c")}, "tokens": ["a", "b", "c"], "raw": ""})
    base = {b.node_id: b.score for b in match_base_nodes(graph, query)}
    assert base == {"fc7": 1.0, "fc8": 1.0}


def test_base_match_no_overlap_empty(fixture_graph):
    query = parse_query("zzznothing matcheszzz", fixture_graph.rules, fixture_graph.model)
    assert match_base_nodes(fixture_graph, query) == []


def test_base_match_keeps_max_of_cosine_and_ln():
    graph = graph_of(
        docs=[("d1", NodeType.FC, {"u": 2.0, "other": 5.0}), ("d2", NodeType.FC, {"u": 2.0})],
        lns=[(("u",), [("d1", 1 / 3), ("d2", 1 / 3)])],
    )
    query = type("Q", (), {"vector": {"u": 2.0}, "ngrams": {("u",)}, "tokens": ["u"], "raw": ""})
    base = {b.node_id: b.score for b in match_base_nodes(graph, query)}
    # d2: cosine 1.0 beats unigram 1/3; d1: cosine < 1 but still above 1/3
    assert base["d2"] == 1.0
    assert base["d1"] > 1 / 3


# --- expand ----------------------------------------------------------------


def three_node_ln_graph(weight=1.0):
    return graph_of(
        docs=[("fc1", NodeType.FC, {}), ("fc2", NodeType.FC, {})],
        lns=[(("a", "b", "c"), [("fc1", weight), ("fc2", weight)])],
    )


def test_expand_depth_zero_is_base():
    graph = three_node_ln_graph()
    base = [ScoredNode("fc1", 1.0, True)]
    result = expand(graph, base, SearchConfig(depth=0, min_score=0.01))
    assert [(r.node_id, r.score) for r in result] == [("fc1", 1.0)]


def test_expand_through_ln_is_one_hop():
    graph = three_node_ln_graph()
    base = [ScoredNode("fc1", 1.0, True)]
    result = {r.node_id: r for r in expand(graph, base, SearchConfig(depth=1, min_score=0.01))}
    assert result["fc2"].score == 1.0
    assert result["fc2"].depth_used == 1
    assert [step[0] for step in result["fc2"].best_path] == [
        RelationCategory.FC_LN,
        RelationCategory.FC_LN,
    ]


def test_expand_ln_weights_multiply():
    graph = three_node_ln_graph(weight=1 / 3)
    base = [ScoredNode("fc1", 0.9, True)]
    result = {r.node_id: r for r in expand(graph, base, SearchConfig(depth=1, min_score=0.01))}
    assert result["fc2"].score == pytest.approx(0.9 / 9, abs=1e-12)


def test_expand_hop_bound():
    graph = graph_of(
        docs=[("p1", NodeType.PE, {}), ("p2", NodeType.PE, {}, "p1"), ("p3", NodeType.PE, {}, "p2")],
        doc_edges=[
            ("p1", "p2", RelationCategory.PE_PE, 1.0),
            ("p2", "p3", RelationCategory.PE_PE, 1.0),
        ],
    )
    base = [ScoredNode("p1", 0.8, True)]
    result = {r.node_id for r in expand(graph, base, SearchConfig(depth=1, min_score=0.01))}
    assert result == {"p1", "p2"}
    result2 = {r.node_id for r in expand(graph, base, SearchConfig(depth=2, min_score=0.01))}
    assert result2 == {"p1", "p2", "p3"}


def test_expand_min_score_floor():
    graph = three_node_ln_graph(weight=1 / 3)  # product 1/9
    base = [ScoredNode("fc1", 0.2, True)]
    result = {r.node_id for r in expand(graph, base, SearchConfig(depth=1, min_score=0.05))}
    assert result == {"fc1"}  # 0.2/9 = 0.022 < 0.05


def test_expand_never_emits_ln():
    graph = three_node_ln_graph()
    base = [ScoredNode("fc1", 1.0, True)]
    for depth in (0, 1, 2):
        for node in expand(graph, base, SearchConfig(depth=depth, min_score=0.01)):
            assert graph.nodes[node.node_id].node_type is not NodeType.LN


def test_expand_base_flag_follows_best_state():
    # fc2 is base at 0.1 but reachable from fc1 at 1.0; the path wins
    graph = graph_of(
        docs=[("fc1", NodeType.FC, {}), ("fc2", NodeType.FC, {})],
        doc_edges=[("fc1", "fc2", RelationCategory.FC_FC, 1.0)],
    )
    base = [ScoredNode("fc1", 1.0, True), ScoredNode("fc2", 0.1, True)]
    result = {r.node_id: r for r in expand(graph, base, SearchConfig(depth=1, min_score=0.01))}
    assert result["fc2"].score == 1.0
    assert result["fc2"].base is False
    assert result["fc2"].best_path != ()
    # and a base node that keeps its own score stays flagged base with empty path
    assert result["fc1"].base is True and result["fc1"].best_path == ()


# --- search ----------------------------------------------------------------


def test_search_limit_and_order(fixture_graph):
    config = SearchConfig(depth=1, limit=1)
    [top] = search(fixture_graph, "crystal oscillator failed", config)
    everything = search(fixture_graph, "crystal oscillator failed", SearchConfig(depth=1, limit=50))
    assert top.node_id == everything[0].node_id
    scores = [r.score for r in everything]
    assert scores == sorted(scores, reverse=True)
    for earlier, later in zip(everything, everything[1:]):
        if earlier.score == later.score:
            assert earlier.node_id < later.node_id


def test_search_type_filter_yields_empty_not_error(fixture_graph):
    results = search(
        fixture_graph,
        "microchip assembly",
        SearchConfig(depth=0, result_types=frozenset({NodeType.FC})),
    )
    assert all(fixture_graph.nodes[r.node_id].node_type is NodeType.FC for r in results)


def test_search_empty_query_propagates(fixture_graph):
    with pytest.raises(EmptyQuery):
        search(fixture_graph, "the of and")


def test_search_deterministic(fixture_graph):
    config = SearchConfig(depth=2, limit=10, result_types=frozenset({NodeType.FC, NodeType.PE}))
    first = search(fixture_graph, "oscillator failed", config)
    second = search(fixture_graph, "oscillator failed", config)
    assert [(r.node_id, r.score, r.best_path) for r in first] == [
        (r.node_id, r.score, r.best_path) for r in second
    ]


def test_depth_monotonicity(fixture_graph):
    queries = ["crystal oscillator", "regulator power", "oscillator failed", "voltage spike"]
    for query in queries:
        previous: set[str] = set()
        for depth in (0, 1, 2, 3):
            config = SearchConfig(depth=depth, limit=1000, min_score=0.001,
                                  result_types=frozenset({NodeType.FC, NodeType.PE, NodeType.PS}))
            current = {r.node_id for r in search(fixture_graph, query, config)}
            assert previous <= current
            previous = current


def test_relation_set_monotonicity(fixture_docs, fixture_model, fixture_corpus):
    chain = [["FC_FC"], ["FC_FC", "LN"], ["FC_FC", "LN", "PE_PE"]]
    queries = ["crystal oscillator", "regulator power", "oscillator failed"]
    previous: dict[str, set[str]] = {q: set() for q in queries}
    for tokens in chain:
        config = GraphConfig(enabled_relation_categories=expand_category_tokens(tokens))
        graph = build_graph(fixture_docs, fixture_model, config, fixture_corpus.rules)
        for query in queries:
            results = {
                r.node_id
                for r in search(graph, query, SearchConfig(depth=1, limit=1000, min_score=0.001))
            }
            assert previous[query] <= results
            previous[query] = results


# --- recommend -------------------------------------------------------------


def test_recommend_planted_trigram(fixture_graph):
    # "osc" element and fc1/fc2 share the "crystal oscil" bigram LN
    results = recommend(fixture_graph, element_id="osc", config=SearchConfig(depth=1, min_score=0.01))
    ids = {r.node_id for r in results}
    assert "fc1" in ids and "fc2" in ids
    for r in results:
        assert fixture_graph.nodes[r.node_id].node_type is NodeType.FC


def test_recommend_direct_ln_share_scores_full_weight():
    graph = graph_of(
        docs=[("pe1", NodeType.PE, {}), ("fc3", NodeType.FC, {})],
        lns=[(("a", "b", "c"), [("pe1", 1.0), ("fc3", 1.0)])],
    )
    [result] = recommend(graph, element_id="pe1", config=SearchConfig(depth=1, min_score=0.01))
    assert result.node_id == "fc3"
    assert result.score == 1.0


def test_recommend_isolated_element_empty():
    graph = graph_of(docs=[("pe1", NodeType.PE, {}), ("fc1", NodeType.FC, {"x": 1.0})])
    assert recommend(graph, element_id="pe1", config=SearchConfig(depth=2)) == []


def test_recommend_unknown_element(fixture_graph):
    with pytest.raises(UnknownElement):
        recommend(fixture_graph, element_id="not-there")
    with pytest.raises(UnknownElement):
        recommend(fixture_graph, element_id="fc1")  # exists but is not a PE


def test_recommend_by_text(fixture_graph):
    results = recommend(
        fixture_graph, element_text="crystal oscillator block", config=SearchConfig(depth=1)
    )
    assert results
    assert all(fixture_graph.nodes[r.node_id].node_type is NodeType.FC for r in results)


def test_recommend_needs_a_target(fixture_graph):
    with pytest.raises(ValueError):
        recommend(fixture_graph)


# --- config validation ------------------------------------------------------


def test_search_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(depth=-1)
    with pytest.raises(ValueError):
        SearchConfig(limit=0)
    with pytest.raises(ValueError):
        SearchConfig(min_score=0.0)
    with pytest.raises(ValueError):
        SearchConfig(result_types=frozenset({NodeType.LN}))


# --- property tests over random graphs --------------------------------------


def random_graph(rng: random.Random) -> KnowledgeGraph:
    model = fit_model([doc_of("seed", [["seed"]])])
    graph = KnowledgeGraph(GraphConfig(), RULES, model)
    doc_count = rng.randint(2, 10)
    types = [rng.choice([NodeType.FC, NodeType.FC, NodeType.PE, NodeType.PS]) for _ in range(doc_count)]
    for i, node_type in enumerate(types):
        graph.add_node(
            Node(
                id=f"d{i:02d}",
                node_type=node_type,
                label=f"d{i:02d}",
                payload=DocumentVector(f"d{i:02d}", {}, 20),
            )
        )
    doc_ids = list(graph.nodes)
    for _ in range(rng.randint(0, 8)):
        a, b = rng.sample(doc_ids, 2)
        ta, tb = graph.nodes[a].node_type, graph.nodes[b].node_type
        from lessonsgraph.kgraph import category_for

        category = category_for(ta, tb)
        if category is None:
            continue
        try:
            graph.add_edge(a, b, category, rng.uniform(0.05, 1.0))
        except ValueError:
            pass  # duplicate pair
    for li in range(rng.randint(0, 4)):
        n = rng.randint(1, 3)
        members = rng.sample(doc_ids, min(len(doc_ids), rng.randint(2, 4)))
        terms = tuple(f"t{li}{j}" for j in range(n))
        ln_id = f"ln:{n}:{' '.join(terms)}"
        graph.add_node(
            Node(id=ln_id, node_type=NodeType.LN, label=" ".join(terms),
                 payload=NGram(terms, n, frozenset(members)))
        )
        for doc_id in members:
            category = {
                NodeType.FC: RelationCategory.FC_LN,
                NodeType.PE: RelationCategory.PE_LN,
                NodeType.PS: RelationCategory.PS_LN,
            }[graph.nodes[doc_id].node_type]
            graph.add_edge(doc_id, ln_id, category, n / 3)
    return graph


def test_score_dominance_on_random_graphs():
    rng = random.Random(2024)
    for _ in range(60):
        graph = random_graph(rng)
        doc_ids = [nid for nid, n in graph.nodes.items() if n.node_type is not NodeType.LN]
        base = [
            ScoredNode(node_id, rng.uniform(0.1, 1.0), True)
            for node_id in rng.sample(doc_ids, rng.randint(1, min(3, len(doc_ids))))
        ]
        best_base = max(b.score for b in base)
        config = SearchConfig(depth=rng.randint(0, 3), min_score=1e-6, limit=10**9)
        for node in expand(graph, base, config):
            assert node.score <= best_base + 1e-12
            assert node.score <= 1.0
            assert graph.nodes[node.node_id].node_type is not NodeType.LN
            if node.base:
                assert node.best_path == ()
            else:
                assert node.best_path
                path_product = 1.0
                for _, weight in node.best_path:
                    path_product *= weight
                assert node.score <= best_base * path_product + 1e-12


def test_depth_monotonicity_on_random_graphs():
    rng = random.Random(99)
    for _ in range(30):
        graph = random_graph(rng)
        doc_ids = [nid for nid, n in graph.nodes.items() if n.node_type is not NodeType.LN]
        base = [ScoredNode(rng.choice(doc_ids), 1.0, True)]
        previous: set[str] = set()
        for depth in (0, 1, 2, 3):
            config = SearchConfig(depth=depth, min_score=1e-6, limit=10**9)
            current = {n.node_id for n in expand(graph, base, config)}
            assert previous <= current
            previous = current


# --- reachability / subgraph -------------------------------------------------


def test_reachable_within_matches_expand(fixture_graph):
    for start in list(fixture_graph.document_ids())[:4]:
        for radius in (0, 1, 2):
            reach = set(reachable_within(fixture_graph, start, radius))
            expanded = {
                n.node_id
                for n in expand(
                    fixture_graph,
                    [ScoredNode(start, 1.0, True)],
                    SearchConfig(depth=radius, min_score=1e-9, limit=10**9),
                )
            }
            assert reach == expanded


def test_subgraph_radius_zero(fixture_graph):
    nodes, edges = subgraph_slice(fixture_graph, "fc1", 0)
    assert nodes == ["fc1"]
    assert edges == []


def test_subgraph_fc_ln_fc_chain():
    graph = three_node_ln_graph()
    nodes, edge_indexes = subgraph_slice(graph, "fc1", 1)
    assert set(nodes) == {"fc1", "fc2", "ln:3:a b c"}
    assert len(edge_indexes) == 2


def test_subgraph_unknown_node(fixture_graph):
    with pytest.raises(UnknownNode):
        subgraph_slice(fixture_graph, "missing", 1)


def test_subgraph_from_ln_start():
    graph = three_node_ln_graph()
    nodes, _ = subgraph_slice(graph, "ln:3:a b c", 0)
    assert nodes == ["ln:3:a b c"]
    nodes1, _ = subgraph_slice(graph, "ln:3:a b c", 1)
    assert set(nodes1) == {"fc1", "fc2", "ln:3:a b c"}
