"""Similarity scores, optimal paper assignment, and outcome metrics.

The assignment maximizes total reviewer-paper similarity subject to an
exact per-paper load, a per-reviewer cap, and conflict exclusion.  The
constraint matrix is totally unimodular, so the fractional relaxation
solved here has an integral optimum; the solver's basic solution is
rounded and validated.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import csr_matrix

from .errors import BidRingError, ConfigError, InfeasibleAssignmentError

DEFAULT_PAPER_LOAD = 3
DEFAULT_REVIEWER_CAP = 6


def similarity(dataset):
    """Similarity matrix: half the text similarity, doubled by a bid."""
    if dataset.text_sim is None:
        raise ConfigError("dataset has no text similarities")
    return 0.5 * dataset.text_sim * np.where(dataset.bid, 2.0, 1.0)


@dataclass(frozen=True)
class Assignment:
    """Paper -> reviewer-set mapping with its objective value."""

    by_paper: tuple  # tuple of frozensets, indexed by paper
    objective: float

    def reviewers_of(self, paper):
        return self.by_paper[paper]

    def save_csv(self, path, reviewers=None, papers=None):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["paper", "reviewer"])
            for p, revs in enumerate(self.by_paper):
                name_p = papers[p] if papers is not None else p
                for r in sorted(revs):
                    writer.writerow([name_p, reviewers[r] if reviewers is not None else r])


def assignment_value(sim, by_paper):
    """Canonical objective evaluation: sum in (paper, reviewer) order."""
    total = 0.0
    for p, revs in enumerate(by_paper):
        for r in sorted(revs):
            total += sim[r, p]
    return total


def _feasibility_witness(eligible, paper_load, reviewer_cap):
    """Papers that cannot be filled, via a max-flow feasibility check."""
    from scipy.sparse.csgraph import maximum_flow

    n_r, n_p = eligible.shape
    short = [p for p in range(n_p) if int(eligible[:, p].sum()) < paper_load]
    if short:
        return short
    # source 0, reviewers 1..n_r, papers n_r+1..n_r+n_p, sink last
    n_nodes = n_r + n_p + 2
    src, sink = 0, n_nodes - 1
    rows, cols, caps = [], [], []
    for r in range(n_r):
        rows.append(src)
        cols.append(1 + r)
        caps.append(reviewer_cap)
    rr, pp = np.nonzero(eligible)
    rows.extend(1 + rr)
    cols.extend(1 + n_r + pp)
    caps.extend([1] * rr.size)
    for p in range(n_p):
        rows.append(1 + n_r + p)
        cols.append(sink)
        caps.append(paper_load)
    graph = csr_matrix((np.asarray(caps, dtype=np.int32), (rows, cols)),
                       shape=(n_nodes, n_nodes))
    result = maximum_flow(graph, src, sink)
    if result.flow_value >= paper_load * n_p:
        return []
    flow = result.flow
    return [p for p in range(n_p) if flow[1 + n_r + p, sink] < paper_load]


def solve_assignment(sim, conflicts, paper_load=DEFAULT_PAPER_LOAD,
                     reviewer_cap=DEFAULT_REVIEWER_CAP):
    """Maximum-similarity assignment under load, cap, and conflict constraints.

    `sim` is the similarity matrix and `conflicts` a boolean matrix of
    excluded pairs.  Raises InfeasibleAssignmentError naming deficient
    papers when no feasible assignment exists.
    """
    sim = np.asarray(sim, dtype=float)
    conflicts = np.asarray(conflicts, dtype=bool)
    n_r, n_p = sim.shape
    if paper_load * n_p > reviewer_cap * n_r:
        raise InfeasibleAssignmentError(
            f"{n_p} papers x load {paper_load} exceed {n_r} reviewers x cap {reviewer_cap}",
            deficient_papers=range(n_p))
    eligible = ~conflicts
    rr, pp = np.nonzero(eligible)
    n_vars = rr.size
    if n_vars == 0 or np.bincount(pp, minlength=n_p).min() < paper_load:
        witness = _feasibility_witness(eligible, paper_load, reviewer_cap)
        raise InfeasibleAssignmentError(
            f"papers {witness} cannot receive {paper_load} reviewers",
            deficient_papers=witness)
    # equality rows per paper, inequality rows per reviewer
    a_eq = csr_matrix((np.ones(n_vars), (pp, np.arange(n_vars))), shape=(n_p, n_vars))
    a_ub = csr_matrix((np.ones(n_vars), (rr, np.arange(n_vars))), shape=(n_r, n_vars))
    res = linprog(-sim[rr, pp], A_ub=a_ub, b_ub=np.full(n_r, reviewer_cap),
                  A_eq=a_eq, b_eq=np.full(n_p, paper_load), bounds=(0, 1),
                  method="highs-ds")
    if res.status == 2:  # infeasible
        witness = _feasibility_witness(eligible, paper_load, reviewer_cap)
        raise InfeasibleAssignmentError(
            f"papers {witness} cannot receive {paper_load} reviewers",
            deficient_papers=witness)
    if not res.success:
        raise BidRingError(f"assignment solve failed: {res.message}")
    x = res.x
    if np.abs(x - np.round(x)).max() > 1e-6:
        raise BidRingError("assignment relaxation returned a fractional solution")
    chosen = np.round(x).astype(bool)
    by_paper = [set() for _ in range(n_p)]
    for r, p in zip(rr[chosen], pp[chosen]):
        by_paper[p].add(int(r))
    by_paper = tuple(frozenset(s) for s in by_paper)
    _validate(by_paper, conflicts, paper_load, reviewer_cap)
    return Assignment(by_paper, assignment_value(sim, by_paper))


def _validate(by_paper, conflicts, paper_load, reviewer_cap):
    loads = np.zeros(conflicts.shape[0], dtype=int)
    for p, revs in enumerate(by_paper):
        if len(revs) != paper_load:
            raise BidRingError(f"paper {p} got {len(revs)} reviewers")
        for r in revs:
            if conflicts[r, p]:
                raise BidRingError(f"conflicted pair ({r}, {p}) assigned")
            loads[r] += 1
    if loads.max(initial=0) > reviewer_cap:
        raise BidRingError("a reviewer exceeds the cap")


def jaccard(found, truth):
    """|found & truth| / |found | truth|; two empty sets count as 1.0."""
    found, truth = set(found), set(truth)
    union = found | truth
    if not union:
        return 1.0
    return len(found & truth) / len(union)


def success_metrics(assignment, plan, dataset):
    """Collusion outcomes of an assignment.

    Returns (paper_frac, colluder_frac): the fraction of group-authored
    papers with at least one colluder assigned, and the fraction of
    colluders who authored at least one paper reviewed by another
    group member.
    """
    colluders = set(plan.colluders)
    target_papers = sorted({int(p) for r in colluders
                            for p in np.flatnonzero(dataset.author[r])})
    if not target_papers:
        raise ConfigError("colluder group authored no papers")
    hit = {p: bool(colluders & assignment.by_paper[p]) for p in target_papers}
    paper_frac = sum(hit.values()) / len(target_papers)
    winners = 0
    for r in colluders:
        others = colluders - {r}
        authored = np.flatnonzero(dataset.author[r])
        if any(others & assignment.by_paper[int(p)] for p in authored):
            winners += 1
    return paper_frac, winners / len(colluders)
