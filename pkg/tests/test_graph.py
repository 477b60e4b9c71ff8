import json

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from lpa_groupoid.corpus import GRAPHS, chain, lpa1, rose, toeplitz
from lpa_groupoid.graph import Graph, GraphError, analyze, components, load_graph, predict_ring_properties


def doc(vertices, edges):
    return json.dumps({"vertices": vertices, "edges": [{"name": n, "from": a, "to": b} for n, a, b in edges]})


def test_load_a2():
    g = load_graph(doc(["v1", "v2"], [("e", "v1", "v2")]))
    assert g.vertices == ("v1", "v2")
    assert len(g.edges) == 1


def test_load_toeplitz_sinks():
    g = load_graph(doc(["u", "v"], [("c", "u", "u"), ("e", "u", "v")]))
    assert g.sinks == ("v",)


def test_dangling_endpoint():
    with pytest.raises(GraphError, match="dangling"):
        load_graph(doc(["v1"], [("e", "v1", "w")]))


@pytest.mark.parametrize(
    "text, msg",
    [
        (doc(["v", "v"], []), "duplicate vertex"),
        (doc(["v"], [("e", "v", "v"), ("e", "v", "v")]), "duplicate edge"),
        (doc(["v", "e"], [("e", "v", "v")]), "clashes"),
        ('{"vertices": ["v"], "vertices": ["w"]}', "duplicate key"),
        ('{"vertices": ["v"],\n "edges": [}', "line 2"),
        ('{"vertices": []}', "at least one vertex"),
        ('{"vertices": ["v"], "edges": [{"name": "e", "from": "v"}]}', "'to'"),
    ],
)
def test_malformed_documents(text, msg):
    with pytest.raises(GraphError, match=msg):
        load_graph(text)


def test_round_trip_json():
    g = lpa1()
    assert load_graph(g.to_json()) == g


def test_analyze_a2():
    rep = analyze(chain(2))
    assert rep.acyclic and rep.condition_NE
    assert rep.sinks == ["v2"]
    assert rep.isotropy_ranks == [0]


def test_analyze_toeplitz():
    rep = analyze(toeplitz())
    assert not rep.acyclic
    assert rep.cycles == [["c"]]
    assert rep.condition_NE is False
    assert rep.sinks == ["v"]


def test_analyze_lpa1():
    rep = analyze(lpa1())
    assert not rep.acyclic
    assert rep.isotropy_ranks == [1]
    assert rep.sinks == []


def test_predictions():
    assert predict_ring_properties(analyze(chain(2)))["left_noetherian_graph_criterion"] is True
    assert predict_ring_properties(analyze(toeplitz()))["left_noetherian_graph_criterion"] is False
    rose2 = predict_ring_properties(analyze(rose(2)))
    assert rose2["not_von_neumann_regular_graph_criterion"] is True


def test_components_of_disjoint_union():
    g = Graph.build(["a", "b", "c", "d"], [("x", "a", "b"), ("y", "d", "c")])
    assert components(g) == [["a", "b"], ["c", "d"]]
    assert analyze(g).isotropy_ranks == [0, 0]


# ---------------------------------------------------------------- networkx as an independent route


def edge_cycles(m):
    """Simple cycles counted over edges: each vertex cycle times its parallel-edge choices."""
    total = 0
    for cyc in nx.simple_cycles(nx.DiGraph(m)):
        k = 1
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            k *= m.number_of_edges(a, b)
        total += k
    return total


def to_nx(g):
    m = nx.MultiDiGraph()
    m.add_nodes_from(g.vertices)
    for e in g.edges:
        m.add_edge(e.source, e.range, key=e.name)
    return m


@pytest.mark.parametrize("name", sorted(GRAPHS))
def test_against_networkx(name):
    g = GRAPHS[name]()
    rep = analyze(g)
    m = to_nx(g)
    und = nx.MultiGraph(m)
    comps = list(nx.connected_components(und))
    assert sorted(map(sorted, comps)) == sorted(map(sorted, rep.components))
    assert sum(rep.isotropy_ranks) == und.number_of_edges() - und.number_of_nodes() + len(comps)
    assert len(rep.cycles) == edge_cycles(m)
    assert rep.acyclic == nx.is_directed_acyclic_graph(m)


@st.composite
def graphs(draw):
    n = draw(st.integers(1, 5))
    vertices = [f"v{i}" for i in range(n)]
    k = draw(st.integers(0, 7))
    edges = [(f"f{j}", draw(st.sampled_from(vertices)), draw(st.sampled_from(vertices))) for j in range(k)]
    return Graph.build(vertices, edges)


@settings(max_examples=80, deadline=None)
@given(graphs())
def test_report_invariants(g):
    rep = analyze(g)
    assert all(r >= 0 for r in rep.isotropy_ranks)
    if rep.acyclic:
        assert rep.condition_NE
    has_exit = any(any(rep.out_degrees[g.d(f)] > 1 for f in c) for c in rep.cycles)
    assert rep.condition_NE == (not has_exit)
    assert len(rep.cycles) == edge_cycles(to_nx(g))
