import numpy as np
import pytest

from bidring.dataset import ConferenceDataset
from bidring.unigraph import UniGraph


def make_dataset(n_reviewers, n_papers, bids=(), authors=(), conflicts=(), text_sim=None):
    """Small dataset builder taking index pairs; authorship implies conflict."""
    bid_level = np.zeros((n_reviewers, n_papers), dtype=np.int8)
    author = np.zeros((n_reviewers, n_papers), dtype=bool)
    conflict = np.zeros((n_reviewers, n_papers), dtype=bool)
    for r, p in bids:
        bid_level[r, p] = 2
    for r, p in authors:
        author[r, p] = True
        conflict[r, p] = True
    for r, p in conflicts:
        conflict[r, p] = True
    return ConferenceDataset(
        tuple(f"r{i}" for i in range(n_reviewers)),
        tuple(f"p{j}" for j in range(n_papers)),
        bid_level, author, conflict,
        None if text_sim is None else np.asarray(text_sim, dtype=float),
    )


def random_dataset(rng, n_reviewers=12, n_papers=10, bid_prob=0.2, authors_per_paper=2,
                   extra_conflict_prob=0.05):
    """Random dataset with authorships, extra conflicts, and bids."""
    author = np.zeros((n_reviewers, n_papers), dtype=bool)
    for p in range(n_papers):
        rows = rng.choice(n_reviewers, size=min(authors_per_paper, n_reviewers), replace=False)
        author[rows, p] = True
    conflict = author | (rng.random((n_reviewers, n_papers)) < extra_conflict_prob)
    bid = (rng.random((n_reviewers, n_papers)) < bid_prob) & ~conflict
    bid_level = np.where(bid, 2, 0).astype(np.int8)
    return ConferenceDataset(
        tuple(f"r{i}" for i in range(n_reviewers)),
        tuple(f"p{j}" for j in range(n_papers)),
        bid_level, author, conflict,
    )


def uni_from_edges(n, edges):
    adj = np.zeros((n, n), dtype=bool)
    for a, b in edges:
        adj[a, b] = True
    return UniGraph(adj)


def reciprocal_clique(n, members=None, total=None):
    """Directed graph whose `members` form a clique in both directions."""
    members = list(members) if members is not None else list(range(n))
    total = total if total is not None else n
    return uni_from_edges(total, [(a, b) for a in members for b in members if a != b])


def random_uni(rng, n, p):
    adj = rng.random((n, n)) < p
    np.fill_diagonal(adj, False)
    return UniGraph(adj)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
