import pytest

from bidring.bigraph import authored_papers, bid_density, box_counts, build_bi
from bidring.errors import DegenerateSubsetError

from conftest import make_dataset, random_dataset


def brute_bid_density(graph, subset):
    """Direct evaluation of the bid-density formula with explicit loops."""
    subset = list(subset)
    ps = sorted({p for r in subset for p in range(graph.n_papers) if graph.author[r, p]})
    if not ps:
        return None
    n_bid = sum(1 for r in subset for p in ps if graph.bid[r, p])
    n_auth = sum(1 for r in subset for p in ps if graph.author[r, p])
    n_conf = sum(1 for r in subset for p in ps if graph.conflict[r, p])
    denom = len(subset) * len(ps) - n_auth - n_conf
    if denom <= 0:
        return None
    return n_bid / denom


def reciprocal_pair():
    # r0 authors p0, r1 authors p1, bids crossed
    return build_bi(make_dataset(2, 2, bids=[(0, 1), (1, 0)], authors=[(0, 0), (1, 1)]))


def test_label_partition():
    ds = make_dataset(2, 2, bids=[(0, 1)], authors=[(0, 0)], conflicts=[(1, 0)])
    g = build_bi(ds)
    assert g.author[0, 0] and not g.conflict[0, 0]  # authored pair is never a conflict edge
    assert g.conflict[1, 0]
    assert not (g.bid & (g.author | g.conflict)).any()


def test_edge_count_identity(rng):
    for _ in range(10):
        ds = random_dataset(rng, n_reviewers=15, n_papers=12, bid_prob=0.25)
        g = build_bi(ds)
        total = int(g.bid.sum() + g.author.sum() + g.conflict.sum())
        assert total == int(ds.bid.sum()) + int(ds.conflict.sum())


def test_authored_papers_empty_subset():
    g = reciprocal_pair()
    assert authored_papers(g, []).size == 0


def test_authored_papers_coauthors():
    ds = make_dataset(2, 2, authors=[(0, 0), (1, 0)])
    g = build_bi(ds)
    assert list(authored_papers(g, [0, 1])) == [0]


def test_authored_papers_matches_loop(rng):
    ds = random_dataset(rng, n_reviewers=14, n_papers=11)
    g = build_bi(ds)
    for _ in range(20):
        subset = rng.choice(14, size=5, replace=False)
        expect = sorted({p for r in subset for p in range(11) if g.author[r, p]})
        assert list(authored_papers(g, subset)) == expect


def test_bid_density_reciprocal_pair():
    g = reciprocal_pair()
    assert bid_density(g, [0, 1]) == 1.0


def test_bid_density_half():
    ds = make_dataset(2, 2, bids=[(0, 1)], authors=[(0, 0), (1, 1)])
    g = build_bi(ds)
    assert bid_density(g, [0, 1]) == 0.5


def test_bid_density_matches_formula(rng):
    ds = random_dataset(rng, n_reviewers=18, n_papers=14, bid_prob=0.3)
    g = build_bi(ds)
    checked = 0
    for _ in range(50):
        subset = rng.choice(18, size=5, replace=False)
        expect = brute_bid_density(g, subset)
        if expect is None:
            with pytest.raises(DegenerateSubsetError):
                bid_density(g, subset)
        else:
            assert bid_density(g, subset) == expect
            checked += 1
    assert checked > 10


def test_bid_density_degenerate_no_papers():
    ds = make_dataset(3, 2, authors=[(0, 0)])
    g = build_bi(ds)
    with pytest.raises(DegenerateSubsetError, match="authors no papers"):
        bid_density(g, [1, 2])


def test_bid_density_degenerate_zero_denominator():
    # single reviewer authoring a single paper: the 1x1 box is all authorship
    ds = make_dataset(1, 1, authors=[(0, 0)])
    g = build_bi(ds)
    with pytest.raises(DegenerateSubsetError, match="carry a bid"):
        bid_density(g, [0])


def test_bid_density_ignores_outside_bids():
    ds = make_dataset(3, 3, bids=[(0, 1), (2, 0), (0, 2)],
                      authors=[(0, 0), (1, 1), (2, 2)])
    g = build_bi(ds)
    # r2's bid on p0 and r0's bid on p2 are outside the {r0, r1} box
    assert bid_density(g, [0, 1]) == pytest.approx(1 / 2)


def test_bid_density_strictly_increases_with_internal_bid():
    ds = make_dataset(2, 2, bids=[(0, 1)], authors=[(0, 0), (1, 1)])
    g = build_bi(ds)
    before = bid_density(g, [0, 1])
    after = bid_density(g.with_added_bids([(1, 0)]), [0, 1])
    assert after > before
    assert after == 1.0  # every legal pair in the box now carries a bid


def test_box_counts_shape():
    g = reciprocal_pair()
    assert box_counts(g, [0, 1]) == (2, 2, 0, 2, 2)


def test_edge_csv_export(tmp_path):
    ds = make_dataset(2, 1, bids=[(1, 0)], authors=[(0, 0)])
    g = build_bi(ds)
    path = tmp_path / "edges.csv"
    g.save_edge_csv(path, reviewers=["a", "b"], papers=["x"])
    lines = path.read_text().splitlines()
    assert lines[0] == "kind,reviewer,paper"
    assert set(lines[1:]) == {"bid,b,x", "author,a,x"}
