"""Directed reviewer-to-reviewer bidding graph and its edge density.

An edge (r1, r2) means reviewer r1 bid on at least one paper authored
by reviewer r2.  Density of a subset is the fraction of possible
ordered pairs present.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class UniGraph:
    """Directed graph over reviewer indices with boolean adjacency."""

    adj: np.ndarray  # bool, adj[src, dst]

    def __post_init__(self):
        if self.adj.ndim != 2 or self.adj.shape[0] != self.adj.shape[1]:
            raise ConfigError("adjacency must be square")
        if self.adj.dtype != bool:
            object.__setattr__(self, "adj", self.adj.astype(bool))
        if np.diagonal(self.adj).any():
            raise ConfigError("self-loops are not allowed")
        self.adj.setflags(write=False)

    @property
    def n(self):
        return self.adj.shape[0]

    @property
    def n_edges(self):
        return int(self.adj.sum())

    def edges(self):
        return {(int(a), int(b)) for a, b in np.argwhere(self.adj)}

    def undirected_weights(self):
        """Symmetric weight matrix counting each directed edge once (0/1/2)."""
        return self.adj.astype(np.uint8) + self.adj.T.astype(np.uint8)

    def reciprocal_projection(self):
        """Symmetric boolean adjacency keeping pairs bid in both directions."""
        return self.adj & self.adj.T

    def total_degrees(self, subset=None):
        """In+out degree of every vertex, optionally within an induced subset."""
        if subset is None:
            return self.adj.sum(axis=0) + self.adj.sum(axis=1)
        sub = np.asarray(subset, dtype=int)
        block = self.adj[np.ix_(sub, sub)]
        return block.sum(axis=0) + block.sum(axis=1)

    def with_added_edges(self, pairs):
        """Copy of the graph with the given (src, dst) edges added."""
        adj = self.adj.copy()
        adj.setflags(write=True)
        for a, b in pairs:
            if a == b:
                raise ConfigError("cannot add a self-loop")
            adj[a, b] = True
        return UniGraph(adj)

    def save_edge_csv(self, path, reviewers=None):
        names = reviewers if reviewers is not None else [str(i) for i in range(self.n)]
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["src", "dst"])
            for a, b in sorted(self.edges()):
                writer.writerow([names[a], names[b]])


def build_uni(dataset):
    """Graph with an edge (r1, r2) iff r1 bid on some paper authored by r2."""
    bid = dataset.bid
    counts = bid.astype(np.int32) @ dataset.author.astype(np.int32).T
    return UniGraph(counts > 0)


def induced_edge_count(graph, subset):
    """Number of directed edges with both endpoints in the subset."""
    sub = np.asarray(list(subset) if not isinstance(subset, np.ndarray) else subset, dtype=int)
    if sub.size == 0:
        return 0
    return int(graph.adj[np.ix_(sub, sub)].sum())


def edge_density(graph, subset):
    """Fraction of the |S|(|S|-1) possible ordered pairs present in S."""
    sub = np.asarray(list(subset) if not isinstance(subset, np.ndarray) else subset, dtype=int)
    if sub.size < 2:
        raise ConfigError("edge density needs at least 2 reviewers")
    if len(set(sub.tolist())) != sub.size:
        raise ConfigError("subset contains duplicate reviewers")
    return induced_edge_count(graph, sub) / (sub.size * (sub.size - 1))
