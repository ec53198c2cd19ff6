import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bidring.errors import ConfigError
from bidring.unigraph import UniGraph, build_uni, edge_density, induced_edge_count

from conftest import make_dataset, random_dataset


def graph_from_edges(n, edges):
    adj = np.zeros((n, n), dtype=bool)
    for a, b in edges:
        adj[a, b] = True
    return UniGraph(adj)


def brute_build_uni(dataset):
    """Triple loop over (r1, p, r2) straight from the definition."""
    edges = set()
    for r1 in range(dataset.n_reviewers):
        for p in range(dataset.n_papers):
            if not dataset.bid[r1, p]:
                continue
            for r2 in range(dataset.n_reviewers):
                if dataset.author[r2, p] and r1 != r2:
                    edges.add((r1, r2))
    return edges


def brute_edge_count(graph, subset):
    subset = list(subset)
    return sum(1 for a in subset for b in subset if a != b and graph.adj[a, b])


def test_build_one_bid_two_authors():
    ds = make_dataset(3, 1, bids=[(0, 0)], authors=[(1, 0), (2, 0)])
    g = build_uni(ds)
    assert g.edges() == {(0, 1), (0, 2)}


def test_build_deduplicates_multiple_papers():
    ds = make_dataset(2, 2, bids=[(0, 0), (0, 1)], authors=[(1, 0), (1, 1)])
    g = build_uni(ds)
    assert g.edges() == {(0, 1)}


def test_build_matches_brute_force(rng):
    for _ in range(10):
        ds = random_dataset(rng, n_reviewers=50, n_papers=30, bid_prob=0.15)
        g = build_uni(ds)
        assert g.edges() == brute_build_uni(ds)


def test_no_bids_gives_edgeless_graph():
    ds = make_dataset(5, 4, authors=[(0, 0), (1, 1)])
    assert build_uni(ds).n_edges == 0


def test_density_full_clique():
    g = graph_from_edges(3, [(a, b) for a in range(3) for b in range(3) if a != b])
    assert edge_density(g, [0, 1, 2]) == 1.0


def test_density_single_edge():
    g = graph_from_edges(3, [(0, 1)])
    assert edge_density(g, [0, 1, 2]) == pytest.approx(1 / 6)
    assert induced_edge_count(g, [0, 1, 2]) == 1


def test_density_requires_two_vertices():
    g = graph_from_edges(3, [(0, 1)])
    with pytest.raises(ConfigError):
        edge_density(g, [0])


def test_density_matches_brute_force_subsets(rng):
    ds = random_dataset(rng, n_reviewers=20, n_papers=15, bid_prob=0.3)
    g = build_uni(ds)
    for _ in range(50):
        subset = rng.choice(20, size=8, replace=False)
        e = brute_edge_count(g, subset)
        assert induced_edge_count(g, subset) == e
        assert edge_density(g, subset) == e / (8 * 7)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_density_invariant_to_outside_vertices(data):
    n = data.draw(st.integers(4, 10))
    edges = data.draw(st.sets(
        st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda e: e[0] != e[1])))
    g = graph_from_edges(n, edges)
    size = data.draw(st.integers(2, n - 1))
    subset = sorted(data.draw(st.permutations(range(n)))[:size])
    base = edge_density(g, subset)
    # adding edges that touch outside vertices never changes the density
    outside = [v for v in range(n) if v not in subset]
    g2 = g.with_added_edges([(outside[0], subset[0])]) if outside else g
    assert edge_density(g2, subset) == base
    assert 0.0 <= base <= 1.0


def test_density_monotone_in_internal_edges(rng):
    g = graph_from_edges(6, [(0, 1), (2, 3)])
    subset = [0, 1, 2, 3]
    before = edge_density(g, subset)
    after = edge_density(g.with_added_edges([(1, 2)]), subset)
    assert after > before


def test_reciprocal_projection_and_weights():
    g = graph_from_edges(3, [(0, 1), (1, 0), (1, 2)])
    w = g.undirected_weights()
    assert w[0, 1] == w[1, 0] == 2
    assert w[1, 2] == w[2, 1] == 1
    rp = g.reciprocal_projection()
    assert rp[0, 1] and rp[1, 0] and not rp[1, 2]


def test_edge_csv_export(tmp_path):
    g = graph_from_edges(3, [(2, 0), (0, 1)])
    path = tmp_path / "edges.csv"
    g.save_edge_csv(path)
    assert path.read_text().splitlines() == ["src,dst", "0,1", "2,0"]
