"""Counting and locating dense honest-reviewer groups.

Exact counts come from time-budgeted search: a pruned backtracking
enumeration for edge density and a plain subset enumeration for bid
density (whose denominator defeats cheap pruning).  When a budget
expires mid-search the count so far is reported as a lower bound.
Greedy peeling produces a frontier of (size, density) points spanning
group sizes the exact search cannot reach.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .bigraph import bid_density
from .errors import ConfigError, DegenerateSubsetError

_BUDGET_CHECK_EVERY = 2048
_EPS = 1e-9


@dataclass(frozen=True)
class CensusCell:
    """Count of author groups of one size at one density threshold."""

    k: int
    threshold: float
    count: int
    exact: bool  # False means the count is a time-budget lower bound


@dataclass(frozen=True)
class PeelFrontier:
    """Sequence of (size, density) points, one per peeling step."""

    sizes: tuple
    densities: tuple
    degenerate: tuple = field(default=None)

    def __post_init__(self):
        if len(self.sizes) != len(self.densities):
            raise ConfigError("sizes and densities must align")
        if self.degenerate is None:
            object.__setattr__(self, "degenerate", tuple(False for _ in self.sizes))

    def points(self):
        return list(zip(self.sizes, self.densities))


def _meets(edges, k, threshold):
    """Whether an edge count reaches density >= threshold at size k."""
    return edges >= threshold * k * (k - 1) - _EPS


class _Budget:
    """Cooperative wall-clock budget checked every few search nodes."""

    def __init__(self, seconds):
        self.deadline = None if seconds is None else time.monotonic() + seconds
        self.ticks = 0
        self.expired = seconds is not None and seconds <= 0

    def tick(self):
        if self.expired or self.deadline is None:
            return self.expired
        self.ticks += 1
        if self.ticks % _BUDGET_CHECK_EVERY == 0 and time.monotonic() >= self.deadline:
            self.expired = True
        return self.expired


def count_uni_groups(graph, author_set, k, gamma, time_budget=None):
    """Count size-k subsets of the author set with edge density >= gamma.

    Backtracking over authors in index order; a partial subset is
    pruned when filling every remaining pair in both directions still
    cannot reach the threshold, which never discards a qualifying
    subset.
    """
    if k < 2:
        raise ConfigError("group size must be at least 2")
    if not 0 < gamma <= 1:
        raise ConfigError("gamma must be in (0, 1]")
    authors = np.asarray(sorted(author_set), dtype=int)
    budget = _Budget(time_budget)
    if authors.size < k:
        return CensusCell(k, gamma, 0, not budget.expired)
    weights = graph.undirected_weights()[np.ix_(authors, authors)].astype(np.int64)
    need = gamma * k * (k - 1) - _EPS
    n = authors.size
    count = 0
    truncated = False

    # stack frames: (next candidate position, edges inside chosen prefix)
    chosen = []

    def recurse(start, edges):
        nonlocal count, truncated
        if truncated:
            return
        j = len(chosen)
        if j == k:
            if edges >= need:
                count += 1
            return
        # max future edges: complete every pair not yet inside the prefix
        if edges + (k * (k - 1) - j * (j - 1)) < need:
            return
        for pos in range(start, n - (k - j) + 1):
            if budget.tick():
                truncated = True
                return
            gained = int(weights[pos, chosen].sum()) if chosen else 0
            chosen.append(pos)
            recurse(pos + 1, edges + gained)
            chosen.pop()
            if truncated:
                return

    if budget.expired:
        truncated = True
    else:
        recurse(0, 0)
    return CensusCell(k, gamma, count, not truncated)


def count_bi_groups(graph, author_set, k, eta, time_budget=None):
    """Count size-k author subsets with bid density >= eta.

    Plain enumeration (the bid-density denominator rules out sound
    cheap pruning); degenerate subsets are skipped, never counted.
    """
    if k < 2:
        raise ConfigError("group size must be at least 2")
    if not 0 < eta <= 1:
        raise ConfigError("eta must be in (0, 1]")
    authors = sorted(int(a) for a in author_set)
    budget = _Budget(time_budget)
    count = 0
    truncated = budget.expired
    if not truncated:
        for subset in combinations(authors, k):
            if budget.tick():
                truncated = True
                break
            try:
                density = bid_density(graph, subset)
            except DegenerateSubsetError:
                continue
            if density >= eta - _EPS:
                count += 1
    return CensusCell(k, eta, count, not truncated)


def peel_uni(graph, author_set):
    """Greedy peeling frontier on the induced author subgraph.

    Starting from the full author set, repeatedly drop the vertex of
    smallest total (in+out) degree, lowest index first on ties,
    recording (size, edge density) down to size 2.
    """
    authors = np.asarray(sorted(author_set), dtype=int)
    if authors.size < 2:
        raise ConfigError("peeling needs at least 2 authors")
    weights = graph.undirected_weights()[np.ix_(authors, authors)].astype(np.int64)
    alive = np.ones(authors.size, dtype=bool)
    degrees = weights.sum(axis=1)
    edges = int(weights.sum()) // 2  # weights double-count directed edges
    sizes, densities = [], []
    size = authors.size
    sizes.append(size)
    densities.append(edges / (size * (size - 1)))
    while size > 2:
        degs = np.where(alive, degrees, np.iinfo(np.int64).max)
        victim = int(np.argmin(degs))  # argmin takes the lowest index on ties
        alive[victim] = False
        edges -= int(degrees[victim])
        degrees = degrees - weights[victim] * alive
        degrees[victim] = 0
        size -= 1
        sizes.append(size)
        densities.append(edges / (size * (size - 1)))
    return PeelFrontier(tuple(sizes), tuple(densities))


def peel_bi(graph, author_set):
    """Greedy bid-density peeling frontier.

    Each step removes the reviewer whose removal maximizes the bid
    density of the remainder (lowest index on ties); degenerate
    remainders are recorded as density 0 with a degenerate flag.
    """
    current = sorted(int(a) for a in author_set)
    if len(current) < 2:
        raise ConfigError("peeling needs at least 2 authors")

    def density_or_none(subset):
        try:
            return bid_density(graph, subset)
        except DegenerateSubsetError:
            return None

    sizes, densities, degenerate = [], [], []

    def record(subset):
        d = density_or_none(subset)
        sizes.append(len(subset))
        densities.append(0.0 if d is None else d)
        degenerate.append(d is None)

    record(current)
    while len(current) > 2:
        best_idx, best_density = None, None
        for i, victim in enumerate(current):
            rest = current[:i] + current[i + 1:]
            d = density_or_none(rest)
            key = -np.inf if d is None else d
            if best_density is None or key > best_density:
                best_idx, best_density = i, key
        current.pop(best_idx)
        record(current)
    return PeelFrontier(tuple(sizes), tuple(densities), tuple(degenerate))


def save_census_csv(cells, path):
    """Write census cells as `k,threshold,count,exact` rows."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "threshold", "count", "exact"])
        for cell in cells:
            writer.writerow([cell.k, format(cell.threshold, "g"), cell.count,
                             "true" if cell.exact else "false"])
