"""Planting collusion rings and realizing them as concrete bid edits.

Unipartite injection adds random ordered edges inside a random author
group until its edge density reaches the target; the modified graph is
the colluders' target graph.  Bid realization then edits the dataset's
bids so the rebuilt graph is no more suspicious than the target: edges
inside the group become a subset of the target's (bids on every
colluder-authored paper, where legal), and edges leaving the group a
superset (one surviving bid per targeted honest author).

Bipartite injection adds bid edges directly, drawing reviewer-paper
pairs uniformly from the group box until the bid density reaches the
target.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bigraph import BiGraph, bid_density, box_counts
from .errors import ConfigError, DegenerateSubsetError
from .unigraph import UniGraph


@dataclass(frozen=True)
class CollusionPlan:
    """A planted colluder group and the parameters that produced it."""

    colluders: frozenset
    representation: str  # "uni" | "bi"
    k: int
    density: float
    seed: int

    def __post_init__(self):
        if len(self.colluders) != self.k:
            raise ConfigError("plan size disagrees with the colluder set")

    def to_json_dict(self):
        return {
            "colluders": sorted(self.colluders),
            "representation": self.representation,
            "k": self.k,
            "density": self.density,
            "seed": self.seed,
        }


def _pick_colluders(author_set, k, rng):
    authors = np.asarray(sorted(author_set), dtype=int)
    if authors.size < k:
        raise ConfigError(f"need {k} authors, only {authors.size} available")
    return np.sort(rng.choice(authors, size=k, replace=False))


def inject_uni(graph: UniGraph, author_set, k, gamma, seed):
    """Plant a size-k group at edge density >= gamma.

    Absent ordered pairs inside the group are added one at a time,
    uniformly at random, so the final density overshoots gamma by at
    most one edge's worth, 1/(k(k-1)).
    """
    if k < 2:
        raise ConfigError("collusion group needs at least 2 reviewers")
    if not 0 <= gamma <= 1:
        raise ConfigError("gamma must be in [0, 1]")
    rng = np.random.default_rng(seed)
    members = _pick_colluders(author_set, k, rng)
    adj = graph.adj.copy()
    adj.setflags(write=True)
    block = adj[np.ix_(members, members)]
    edges = int(block.sum())
    possible = k * (k - 1)
    while edges < gamma * possible - 1e-9:
        absent = np.argwhere(~block & ~np.eye(k, dtype=bool))
        a, b = absent[rng.integers(absent.shape[0])]
        block[a, b] = True
        adj[members[a], members[b]] = True
        edges += 1
    plan = CollusionPlan(frozenset(int(m) for m in members), "uni", k, gamma, seed)
    return UniGraph(adj), plan


def inject_bi(graph, author_set, k, eta, seed, max_resamples=100):
    """Plant a size-k group at bid density >= eta in the bipartite graph.

    Pairs are drawn uniformly from the group-by-group-papers box and
    added as bids when no edge of any label is present; groups whose
    box admits no bids at all are resampled (up to `max_resamples`).
    """
    if k < 2:
        raise ConfigError("collusion group needs at least 2 reviewers")
    if not 0 <= eta <= 1:
        raise ConfigError("eta must be in [0, 1]")
    rng = np.random.default_rng(seed)
    for _ in range(max_resamples):
        members = _pick_colluders(author_set, k, rng)
        try:
            density = bid_density(graph, members)
        except DegenerateSubsetError:
            continue
        break
    else:
        raise ConfigError(f"no non-degenerate group of size {k} found "
                          f"in {max_resamples} attempts")
    bid = graph.bid.copy()
    bid.setflags(write=True)
    papers = np.flatnonzero(graph.author[members].any(axis=0))
    _, n_auth, n_conf, n_s, n_ps = box_counts(graph, members)
    denom = n_s * n_ps - n_auth - n_conf
    n_bids = int(bid[np.ix_(members, papers)].sum())
    while n_bids < eta * denom - 1e-9:
        r = members[rng.integers(k)]
        p = papers[rng.integers(papers.size)]
        if bid[r, p] or graph.author[r, p] or graph.conflict[r, p]:
            continue
        bid[r, p] = True
        n_bids += 1
    out = BiGraph(bid, graph.author, graph.conflict)
    plan = CollusionPlan(frozenset(int(m) for m in members), "bi", k, eta, seed)
    return out, plan


def realize_bids_uni(dataset, target: UniGraph, plan: CollusionPlan, seed):
    """Edit colluders' bids to realize the target graph's edges.

    For each target edge (r1, r2) with r1 in the group: if r2 is also a
    colluder, r1 bids on every paper authored by r2 except pairs that
    cannot carry a bid (conflicts) or would create an in-group edge the
    target lacks (co-authorship with a third colluder); if r2 is
    honest, exactly one existing bid of r1 onto r2's papers survives
    and the rest of those bids are removed.  Bids of non-colluders are
    untouched.
    """
    rng = np.random.default_rng(seed)
    colluders = sorted(plan.colluders)
    member = np.zeros(dataset.n_reviewers, dtype=bool)
    member[colluders] = True
    bid_level = dataset.bid_level.copy()
    bid_level.setflags(write=True)
    default_level = np.int8(2)
    for r1 in colluders:
        partners = np.flatnonzero(target.adj[r1])
        in_partners = partners[member[partners]]
        out_partners = partners[~member[partners]]
        # keep exactly one existing bid per targeted honest author
        keepers = set()
        doomed = set()
        for r2 in out_partners:
            papers_r2 = np.flatnonzero(dataset.author[r2])
            bids_on_r2 = [int(p) for p in papers_r2 if dataset.bid_level[r1, p] > 0]
            if not bids_on_r2:
                raise ConfigError(
                    "target edge lacks a supporting bid; the target graph must "
                    "come from injection on this dataset's graph")
            keepers.add(bids_on_r2[rng.integers(len(bids_on_r2))])
            doomed.update(bids_on_r2)
        for p in doomed - keepers:
            bid_level[r1, p] = 0
        # bid on every paper of every in-group partner, where legal and safe
        for r2 in in_partners:
            for p in np.flatnonzero(dataset.author[r2]):
                if dataset.conflict[r1, p]:
                    continue
                coauthors = np.flatnonzero(dataset.author[:, p])
                ring_coauthors = coauthors[member[coauthors]]
                if all(target.adj[r1, m] for m in ring_coauthors):
                    if bid_level[r1, p] == 0:
                        bid_level[r1, p] = default_level
    return dataset.with_bid_level(bid_level)


def apply_bi_plan(dataset, injected_graph):
    """Carry bid edges added by bipartite injection back into the dataset."""
    added = injected_graph.bid & ~dataset.bid
    bid_level = dataset.bid_level.copy()
    bid_level.setflags(write=True)
    bid_level[added] = 2
    return dataset.with_bid_level(bid_level)


def achieved_overshoot_bound_uni(k):
    """Maximum legal overshoot above the density target: one edge's worth."""
    return 1.0 / (k * (k - 1))


def verify_realization(dataset_before, dataset_after, target, plan):
    """Check the subset/superset containment contracts of bid realization.

    Returns (within_ok, outside_ok) where `within` compares in-group
    edges of the rebuilt graph against the target, and `outside`
    compares every other edge.
    """
    from .unigraph import build_uni

    rebuilt = build_uni(dataset_after)
    member = np.zeros(dataset_before.n_reviewers, dtype=bool)
    member[sorted(plan.colluders)] = True
    within = np.outer(member, member)
    within_ok = not (rebuilt.adj & within & ~target.adj).any()
    outside_ok = not (target.adj & ~within & ~rebuilt.adj).any()
    return bool(within_ok), bool(outside_ok)
