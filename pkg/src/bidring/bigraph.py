"""Bipartite reviewer/paper graph with bid, authorship, and conflict edges.

Bid density of a reviewer subset S is the number of bids from S onto
the papers authored by S, divided by the number of pairs in that box
that could legally carry a bid (all pairs minus authored minus
conflicted).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DegenerateSubsetError


@dataclass(frozen=True)
class BiGraph:
    """Labelled bipartite graph; matrices are [reviewer, paper].

    The three edge sets are disjoint: `conflict` here holds only
    conflicts that are not authorships.
    """

    bid: np.ndarray
    author: np.ndarray
    conflict: np.ndarray  # non-authorship conflicts only

    def __post_init__(self):
        if not (self.bid.shape == self.author.shape == self.conflict.shape):
            raise ConfigError("edge matrices must share one shape")
        for name in ("bid", "author", "conflict"):
            mat = getattr(self, name)
            if mat.dtype != bool:
                object.__setattr__(self, name, mat.astype(bool))
        if (self.bid & (self.author | self.conflict)).any():
            raise ConfigError("bid edges overlap authorship/conflict edges")
        if (self.author & self.conflict).any():
            raise ConfigError("authorship and conflict edges overlap")
        for name in ("bid", "author", "conflict"):
            getattr(self, name).setflags(write=False)

    @property
    def n_reviewers(self):
        return self.bid.shape[0]

    @property
    def n_papers(self):
        return self.bid.shape[1]

    def with_added_bids(self, pairs):
        """Copy of the graph with (reviewer, paper) bid edges added."""
        bid = self.bid.copy()
        bid.setflags(write=True)
        for r, p in pairs:
            if self.author[r, p] or self.conflict[r, p]:
                raise ConfigError(f"pair ({r}, {p}) cannot carry a bid")
            bid[r, p] = True
        return BiGraph(bid, self.author, self.conflict)

    def save_edge_csv(self, path, reviewers=None, papers=None):
        rnames = reviewers if reviewers is not None else [str(i) for i in range(self.n_reviewers)]
        pnames = papers if papers is not None else [str(j) for j in range(self.n_papers)]
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["kind", "reviewer", "paper"])
            for kind, mat in (("bid", self.bid), ("author", self.author),
                              ("conflict", self.conflict)):
                for r, p in np.argwhere(mat):
                    writer.writerow([kind, rnames[r], pnames[p]])


def build_bi(dataset):
    """Labelled bipartite graph from a dataset (conflict edges exclude authorships)."""
    return BiGraph(dataset.bid.copy(), dataset.author.copy(),
                   (dataset.conflict & ~dataset.author).copy())


def _as_index_array(subset):
    sub = np.asarray(list(subset) if not isinstance(subset, np.ndarray) else subset, dtype=int)
    if len(set(sub.tolist())) != sub.size:
        raise ConfigError("subset contains duplicate reviewers")
    return sub


def authored_papers(graph, subset):
    """Indices of papers authored by at least one reviewer in the subset."""
    sub = _as_index_array(subset)
    if sub.size == 0:
        return np.array([], dtype=int)
    return np.flatnonzero(graph.author[sub].any(axis=0))


def box_counts(graph, subset):
    """(bids, authorships, conflicts, |S|, |P[S]|) restricted to S x P[S]."""
    sub = _as_index_array(subset)
    ps = authored_papers(graph, sub)
    if sub.size == 0 or ps.size == 0:
        return 0, 0, 0, sub.size, ps.size
    rows = graph.bid[sub][:, ps], graph.author[sub][:, ps], graph.conflict[sub][:, ps]
    return (int(rows[0].sum()), int(rows[1].sum()), int(rows[2].sum()),
            sub.size, ps.size)


def bid_density(graph, subset):
    """Bid density of a reviewer subset; raises on degenerate subsets."""
    n_bid, n_auth, n_conf, n_s, n_ps = box_counts(graph, subset)
    if n_ps == 0:
        raise DegenerateSubsetError("subset authors no papers")
    denom = n_s * n_ps - n_auth - n_conf
    if denom <= 0:
        raise DegenerateSubsetError("no pair in the subset box could carry a bid")
    return n_bid / denom
