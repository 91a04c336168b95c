import io

import numpy as np
import pytest
from conftest import make_graph, random_graph

from cdeval.graph import (
    FormatError,
    Graph,
    Partition,
    TemporalStream,
    aggregate_temporal,
    connected_components,
    load_edge_list,
    load_partition,
    load_temporal,
    network_stats,
    save_edge_list,
    save_partition,
    save_temporal,
)


def weighted_pairs(g):
    return {(frozenset((a, b)), w) for a, b, w in g.edges()}


def test_default_weight():
    g = load_edge_list("a b\nb c")
    assert (g.n, g.edge_count) == (3, 2)
    assert g.edge_w.tolist() == [1.0, 1.0]


def test_duplicate_lines_accumulate():
    g = load_edge_list("a b 2\na b 3")
    assert g.edge_count == 1
    assert g.edge_w.tolist() == [5.0]


def test_reversed_duplicate_accumulates():
    g = load_edge_list("a b\nb a 2")
    assert g.edge_w.tolist() == [3.0]


def test_comments_blank_lines_and_isolated_node():
    g = load_edge_list("# header\n\na b\nz\n  # indented comment\n")
    assert g.nodes == ("a", "b", "z")
    assert g.degree().tolist() == [1, 1, 0]


def test_reads_paths_and_streams(tmp_path):
    path = tmp_path / "g.edges"
    path.write_text("x y 1.5\n", encoding="utf-8")
    assert load_edge_list(path).total_weight == 1.5
    assert load_edge_list(io.StringIO("x y\n")).edge_count == 1


@pytest.mark.parametrize(
    "text, lineno",
    [("a b\na a", 2), ("a b -1", 1), ("a b zero", 1), ("a b 1 2", 1), ("a b 0", 1), ("a b nan", 1)],
)
def test_malformed_lines(text, lineno):
    with pytest.raises(FormatError) as info:
        load_edge_list(text)
    assert info.value.lineno == lineno


def test_graph_rejects_undeclared_and_duplicates():
    with pytest.raises(ValueError):
        Graph(["a"], [("a", "b", 1.0)])
    with pytest.raises(ValueError):
        Graph(["a", "a"])


def test_node_order_is_insertion_order():
    g = load_edge_list("c a\nb c")
    assert g.nodes == ("c", "a", "b")


def test_edge_list_round_trip(rng):
    for _ in range(20):
        g = random_graph(rng, 12, 0.3, weighted=True)
        assert load_edge_list(save_edge_list(g)).edge_set() == g.edge_set()
        again = load_edge_list(save_edge_list(g))
        assert weighted_pairs(again) == weighted_pairs(g)


def test_degree_and_strength_sums(rng):
    for _ in range(50):
        g = random_graph(rng, int(rng.integers(2, 20)), 0.3, weighted=True)
        assert g.degree().sum() == 2 * g.edge_count
        assert g.strength().sum() == pytest.approx(2 * g.total_weight, abs=1e-12)


def test_aggregate_counts():
    s = TemporalStream((("a", "b", 1), ("a", "b", 5), ("b", "c", 2)))
    g = aggregate_temporal(s)
    assert dict(((u, v), w) for u, v, w in g.edges()) == {("a", "b"): 2.0, ("b", "c"): 1.0}
    assert aggregate_temporal(TemporalStream((("a", "b", 1),))).edge_w.tolist() == [1.0]


@pytest.mark.parametrize("k", [1, 2, 7, 40])
def test_aggregate_weight_equals_count(k):
    s = TemporalStream(tuple(("a", "b", t) for t in range(k)) + (("b", "c", 0),))
    assert aggregate_temporal(s).edge_w.max() == k


def test_aggregate_idempotent():
    s = load_temporal("a b 3\nb c 1\nb a 2\nc d 0\n")
    g1 = aggregate_temporal(s)
    s2 = TemporalStream(tuple((u, v, t) for t, (u, v, w) in enumerate(g1.edges()) for _ in range(int(w))))
    assert weighted_pairs(aggregate_temporal(s2)) == weighted_pairs(g1)


def test_empty_stream_rejected():
    with pytest.raises(ValueError):
        aggregate_temporal(TemporalStream(()))


def test_temporal_errors_and_round_trip():
    with pytest.raises(FormatError):
        load_temporal("a b")
    with pytest.raises(FormatError):
        load_temporal("a b x")
    with pytest.raises(FormatError):
        load_temporal("a a 1")
    s = load_temporal("b c 2\na b 1\n")
    assert s.events[0] == ("a", "b", 1)
    assert load_temporal(save_temporal(s)) == s


def test_network_stats_triangle_and_path():
    tri = network_stats(make_graph([("a", "b"), ("b", "c"), ("a", "c")]))
    assert (tri.density, tri.global_clustering_coefficient, tri.max_degree) == (1.0, 1.0, 2)
    path = network_stats(make_graph([("a", "b"), ("b", "c")]))
    assert path.global_clustering_coefficient == 0.0
    assert path.density == pytest.approx(2 / 3, abs=1e-15)


def test_density_matches_brute_force(rng):
    for _ in range(100):
        n = int(rng.integers(2, 25))
        g = random_graph(rng, n, float(rng.random()))
        assert network_stats(g).density == 2 * g.edge_count / (n * (n - 1))


def test_clustering_matches_networkx(rng):
    import networkx as nx

    for _ in range(30):
        g = random_graph(rng, 15, 0.35)
        ref = nx.Graph()
        ref.add_nodes_from(g.nodes)
        ref.add_edges_from((a, b) for a, b, _ in g.edges())
        assert network_stats(g).global_clustering_coefficient == pytest.approx(nx.transitivity(ref), abs=1e-12)


def test_karate_counts(karate):
    s = network_stats(karate)
    assert (s.node_count, s.edge_count, s.max_degree, s.min_degree) == (34, 78, 17, 1)
    assert s.global_clustering_coefficient == pytest.approx(0.2556818181818182, abs=1e-12)
    assert s.component_count == 1


def test_partition_io():
    p = load_partition("a 0\nb 0\nc 1")
    assert p.communities() == [["a", "b"], ["c"]]
    again = load_partition(save_partition(p))
    assert again.same_assignment(p)
    q = load_partition("x red\ny blue\nz red")
    assert q.labels.tolist() == [0, 1, 0]


def test_partition_bound_to_graph():
    g = make_graph([("a", "b"), ("b", "c")])
    with pytest.raises(ValueError):
        load_partition("a 0\nb 0", g)
    with pytest.raises(ValueError):
        load_partition("a 0\nb 0\nc 0\nd 1", g)
    with pytest.raises(FormatError):
        load_partition("a 0\na 1")
    assert load_partition("c 1\nb 0\na 0", g).nodes == g.nodes


def test_karate_ground_truth_sizes(karate_gt):
    assert sorted(karate_gt.sizes().tolist()) == [16, 18]


def test_partition_canonical_labels():
    p = Partition(list("abcd"), [7, 3, 7, 9])
    assert p.labels.tolist() == [0, 1, 0, 2]
    assert p == Partition(list("abcd"), [1, 0, 1, 5])


def test_partition_restrict_and_align():
    p = Partition(list("abcd"), [0, 1, 1, 2])
    r = p.restrict(["d", "b"])
    assert r.nodes == ("b", "d") and r.labels.tolist() == [0, 1]
    with pytest.raises(ValueError):
        p.restrict(["zz"])
    assert p.aligned(list("dcba")).same_assignment(p)


def test_components():
    two = make_graph([("a", "b"), ("b", "c"), ("a", "c"), ("d", "e"), ("e", "f"), ("d", "f")])
    assert connected_components(two).community_count == 2
    assert connected_components(make_graph([("a", "b"), ("b", "c")])).community_count == 1
    assert connected_components(Graph(list("vwxyz"))).community_count == 5


def test_components_invariant_under_node_order(rng):
    for _ in range(20):
        g = random_graph(rng, 15, 0.1)
        perm = [g.nodes[i] for i in rng.permutation(g.n)]
        h = Graph(perm, g.edges())
        assert connected_components(h).same_assignment(connected_components(g))


def test_subgraph_and_binarize():
    g = make_graph([("a", "b", 2.0), ("b", "c", 3.0)], nodes=["a", "b", "c", "z"])
    assert g.without_isolated().nodes == ("a", "b", "c")
    assert g.binarized().edge_w.tolist() == [1.0, 1.0]
    assert np.array_equal(g.subgraph(["a", "b"]).edge_w, [2.0])
