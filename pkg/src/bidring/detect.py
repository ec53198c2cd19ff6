"""Dense-subgraph detection algorithms over the bidding graphs.

Six detectors share a common result shape: exact densest-subgraph
discovery (DSD), quasi-clique edge-surplus maximization by greedy
peeling and by local search (OQC), tail-probability scoring of the
degree-adjusted edge mass (TellTail), column-weighted bipartite
peeling (Fraudar), and a bid-surplus local search specialized to the
labelled reviewer/paper graph (OQC-Specialized).

Every algorithm's returned objective is produced by the shared
evaluator for that algorithm, so results are exactly recomputable.
Local searches accept a move only on strict improvement, which
guarantees termination; reported subsets therefore admit no improving
single-vertex change.
"""

from __future__ import annotations

import heapq
import json
import time
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog
from scipy.sparse import csr_matrix
from scipy.stats import genpareto

from .bigraph import BiGraph, box_counts
from .errors import BidRingError, ConfigError
from .unigraph import UniGraph

DEFAULT_ALPHA = 1.0 / 3.0

UNI_ALGORITHMS = ("dsd", "oqc_greedy", "oqc_local", "telltail")
BI_ALGORITHMS = UNI_ALGORITHMS + ("fraudar", "oqc_specialized")


@dataclass(frozen=True)
class DetectionResult:
    """Reviewer subset flagged by one detector run."""

    subset: frozenset
    objective: float
    algorithm: str
    initialization: str = "-"
    elapsed: float = 0.0
    empty: bool = False  # designated result for edgeless/degenerate input

    def to_json_dict(self, representation=None, seed=None, reviewers=None):
        subset = sorted(self.subset)
        return {
            "algorithm": self.algorithm,
            "representation": representation,
            "seed": seed,
            "subset": subset if reviewers is None else [reviewers[i] for i in subset],
            "objective": self.objective,
            "initialization": self.initialization,
            "elapsed": self.elapsed,
            "empty": self.empty,
        }


@dataclass(frozen=True)
class InitPlan:
    """Multi-start plan for the local-search detectors."""

    heuristic: bool = True
    n_random: int = 10
    seed: int = 0

    def labels(self):
        out = (["heuristic"] if self.heuristic else [])
        out += [f"random-{i}" for i in range(self.n_random)]
        if not out:
            raise ConfigError("initialization plan has no starts")
        return out

    def random_rng(self, index):
        return np.random.default_rng([self.seed, index])


@dataclass(frozen=True)
class GPTail:
    """Generalized Pareto constants used to score adjusted edge mass.

    The published reference constants are not bundled; these defaults
    are configuration values, and because the CDF is monotone the
    maximizing subset does not depend on them.
    """

    shape: float = 0.5
    scale: float = 1.0
    loc: float = 0.0

    def __post_init__(self):
        if self.scale <= 0:
            raise ConfigError("GP scale must be positive")

    def cdf(self, x):
        return genpareto.cdf(x, self.shape, loc=self.loc, scale=self.scale)

    def sf(self, x):
        return genpareto.sf(x, self.shape, loc=self.loc, scale=self.scale)


# ---------------------------------------------------------------------------
# graph views: every detector consumes a symmetric weight matrix
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GraphView:
    """Symmetric nonnegative integer weights over a unified vertex set.

    Reviewer vertices occupy indices [0, n_rev); any remaining indices
    are paper vertices (bipartite views only).
    """

    weights: np.ndarray
    n_rev: int
    surplus_coeff: float = 1.0  # multiplier on alpha in the edge-surplus penalty
    reciprocal_threshold: int = 1  # weight marking a mutual edge for heuristics

    @property
    def n(self):
        return self.weights.shape[0]

    def total_weight(self):
        return int(self.weights.sum()) // 2

    def reviewer_subset(self, vertices):
        return frozenset(int(v) for v in vertices if v < self.n_rev)


def uni_multigraph_view(graph: UniGraph):
    """Forget direction, keeping each directed edge as one unit of weight."""
    return GraphView(graph.undirected_weights(), graph.n, surplus_coeff=2.0,
                     reciprocal_threshold=2)


def uni_reciprocal_view(graph: UniGraph):
    """Simple graph keeping only pairs with bids in both directions."""
    return GraphView(graph.reciprocal_projection().astype(np.uint8), graph.n,
                     surplus_coeff=2.0)


def bi_view(bigraph: BiGraph, edge_choice="bids"):
    """Unattributed bipartite graph over reviewer+paper vertices."""
    if edge_choice == "bids":
        rect = bigraph.bid
    elif edge_choice == "bids+authorships":
        rect = bigraph.bid | bigraph.author
    else:
        raise ConfigError(f"unknown edge choice {edge_choice!r}")
    n_r, n_p = rect.shape
    n = n_r + n_p
    weights = np.zeros((n, n), dtype=np.uint8)
    weights[:n_r, n_r:] = rect
    weights[n_r:, :n_r] = rect.T
    return GraphView(weights, n_r, surplus_coeff=1.0)


def _subset_weight(weights, subset):
    sub = np.fromiter(subset, dtype=int, count=len(subset))
    if sub.size == 0:
        return 0
    return int(weights[np.ix_(sub, sub)].sum()) // 2


# ---------------------------------------------------------------------------
# shared objective evaluators
# ---------------------------------------------------------------------------

def dsd_objective(view, subset):
    """Edge count over subset size; 0 on the empty subset."""
    if not subset:
        return 0.0
    return _subset_weight(view.weights, subset) / len(subset)


def edge_surplus_objective(view, subset, alpha=DEFAULT_ALPHA):
    """Edges minus the alpha-expected edge count on the subset's pairs."""
    s = len(subset)
    coeff = view.surplus_coeff * alpha
    return _subset_weight(view.weights, subset) - coeff * (s * (s - 1) / 2)


def adjusted_mass(view, subset):
    """Edges inside the subset minus the degree-preserving null expectation."""
    if not subset:
        return 0.0
    m = view.total_weight()
    if m == 0:
        return 0.0
    deg = view.weights.sum(axis=1)
    sub = np.fromiter(subset, dtype=int, count=len(subset))
    d = deg[sub].astype(np.float64)
    null = (d.sum() ** 2 - (d ** 2).sum()) / (4.0 * m)
    return _subset_weight(view.weights, subset) - null


def telltail_objective(view, subset, tail):
    """Generalized-Pareto CDF of the subset's adjusted edge mass."""
    return float(tail.cdf(adjusted_mass(view, subset)))


def fraudar_objective(view, subset):
    """Column-weighted edge mass per vertex, weights from global paper degree."""
    if not subset:
        return 0.0
    col = _fraudar_column_weights(view)
    sub = np.fromiter(subset, dtype=int, count=len(subset))
    block = view.weights[np.ix_(sub, sub)].astype(np.float64)
    # reviewer vertices carry zero column weight, so summing the symmetric
    # block against paper-column weights counts each edge exactly once
    mass = float((block * col[sub][None, :]).sum())
    return mass / len(subset)


def _fraudar_column_weights(view):
    deg = view.weights.sum(axis=1).astype(np.float64)
    col = np.zeros(view.n)
    col[view.n_rev:] = 1.0 / np.log(5.0 + deg[view.n_rev:])
    return col


def oqc_specialized_objective(bigraph, subset, alpha=DEFAULT_ALPHA):
    """Bids into the subset's paper box minus alpha times its legal pair count."""
    if not subset:
        return 0.0
    n_bid, n_auth, n_conf, n_s, n_ps = box_counts(bigraph, list(subset))
    return n_bid - alpha * (n_s * n_ps - n_auth - n_conf)


# ---------------------------------------------------------------------------
# exact densest subgraph (fractional relaxation + level-set rounding)
# ---------------------------------------------------------------------------

def _densest_subset(weights):
    """Exact maximum of e(S)/|S| via the fractional LP.

    One variable per edge and per vertex; an optimal level set of the
    vertex variables attains the LP optimum, so sweeping every
    threshold and keeping the densest level set is exact.
    """
    n = weights.shape[0]
    iu, ju = np.nonzero(np.triu(weights, k=1))
    w = weights[iu, ju].astype(np.float64)
    n_e = iu.size
    if n_e == 0:
        return None
    # columns: x_e (n_e) then y_v (n); rows x_e - y_u <= 0, x_e - y_v <= 0
    e_idx = np.arange(n_e)
    rows = np.empty(4 * n_e, dtype=np.int64)
    cols = np.empty(4 * n_e, dtype=np.int64)
    vals = np.empty(4 * n_e, dtype=np.float64)
    rows[0::4] = rows[1::4] = 2 * e_idx
    rows[2::4] = rows[3::4] = 2 * e_idx + 1
    cols[0::4] = e_idx
    cols[1::4] = n_e + iu
    cols[2::4] = e_idx
    cols[3::4] = n_e + ju
    vals[0::4] = vals[2::4] = 1.0
    vals[1::4] = vals[3::4] = -1.0
    a_ub = csr_matrix((vals, (rows, cols)), shape=(2 * n_e, n_e + n))
    a_eq = csr_matrix((np.ones(n), (np.zeros(n), n_e + np.arange(n))), shape=(1, n_e + n))
    c = np.concatenate([-w, np.zeros(n)])
    # the interior-point path runs crossover, so the solution is basic and
    # an optimal level set is always among the sweep candidates
    res = linprog(c, A_ub=a_ub, b_ub=np.zeros(2 * n_e), A_eq=a_eq, b_eq=[1.0],
                  bounds=(0, None), method="highs-ipm")
    if not res.success:
        raise BidRingError(f"densest-subgraph relaxation failed: {res.message}")
    y = res.x[n_e:]
    best_subset, best_value = None, -1.0
    for threshold in np.unique(y)[::-1]:
        if threshold <= 0:
            continue
        members = np.flatnonzero(y >= threshold)
        value = int(weights[np.ix_(members, members)].sum()) / 2 / members.size
        if value > best_value:
            best_subset, best_value = members, value
    return frozenset(int(v) for v in best_subset)


def dsd(view):
    """Exact densest subgraph of the view's undirected (multi)graph."""
    started = time.perf_counter()
    if view.total_weight() == 0:
        return DetectionResult(frozenset(), 0.0, "dsd", empty=True,
                               elapsed=time.perf_counter() - started)
    subset = _densest_subset(view.weights)
    return DetectionResult(subset, dsd_objective(view, subset), "dsd",
                           elapsed=time.perf_counter() - started)


# ---------------------------------------------------------------------------
# quasi-clique edge surplus
# ---------------------------------------------------------------------------

def _greedy_peel_prefixes(weights):
    """Min-degree peeling order (ties to lowest index) with per-prefix stats.

    Returns (order, sizes, edge_counts): prefix i is the vertex set
    remaining after removing order[:i], so sizes run n..1.
    """
    n = weights.shape[0]
    w = weights.astype(np.int64)
    alive = np.ones(n, dtype=bool)
    deg = w.sum(axis=1)
    edges = int(w.sum()) // 2
    order, sizes, edge_counts = [], [n], [edges]
    for _ in range(n - 1):
        masked = np.where(alive, deg, np.iinfo(np.int64).max)
        victim = int(np.argmin(masked))
        alive[victim] = False
        edges -= int(deg[victim])
        deg = deg - w[victim] * alive
        deg[victim] = 0
        order.append(victim)
        sizes.append(int(alive.sum()))
        edge_counts.append(edges)
    order.append(int(np.flatnonzero(alive)[0]))
    return order, sizes, edge_counts


def oqc_greedy(view, alpha=DEFAULT_ALPHA):
    """Greedy-peeling edge-surplus maximization; returns the best prefix."""
    started = time.perf_counter()
    if view.total_weight() == 0:
        return DetectionResult(frozenset(), 0.0, "oqc_greedy", empty=True,
                               elapsed=time.perf_counter() - started)
    coeff = view.surplus_coeff * alpha
    order, sizes, edge_counts = _greedy_peel_prefixes(view.weights)
    best_i, best_f = 0, -np.inf
    for i, (s, e) in enumerate(zip(sizes, edge_counts)):
        f = e - coeff * (s * (s - 1) / 2)
        if f > best_f:
            best_i, best_f = i, f
    subset = frozenset(range(view.n)) - frozenset(order[:best_i])
    return DetectionResult(subset, edge_surplus_objective(view, subset, alpha),
                           "oqc_greedy", elapsed=time.perf_counter() - started)


def _toggle_search_surplus(w, coeff, start_mask):
    """Hill-climb single-vertex toggles on f(S) = e(S) - coeff*C(|S|,2).

    `w` must already be a signed integer weight matrix.
    """
    mask = start_mask.copy()
    deg = w[:, mask].sum(axis=1)  # weight from each vertex into S
    s = int(mask.sum())
    e = int(w[np.ix_(mask, mask)].sum()) // 2
    f = e - coeff * (s * (s - 1) / 2)
    while True:
        f_add = (e + deg) - coeff * ((s + 1) * s / 2)
        f_rem = (e - deg) - coeff * ((s - 1) * (s - 2) / 2)
        cand = np.where(mask, f_rem, f_add)
        best = int(np.argmax(cand))
        if not cand[best] > f:
            return mask, f
        if mask[best]:
            mask[best] = False
            e -= int(deg[best])
            deg = deg - w[best]
            s -= 1
        else:
            mask[best] = True
            e += int(deg[best])
            deg = deg + w[best]
            s += 1
        f = cand[best]


def _run_starts(view, starts, heuristic_set, climb, objective):
    """Run a climb from every planned start; best objective wins, ties to
    the earliest start."""
    best = None
    for index, label in enumerate(starts.labels()):
        mask = np.zeros(view.n, dtype=bool)
        if label == "heuristic":
            mask[list(heuristic_set)] = True
        else:
            mask = starts.random_rng(index).random(view.n) < 0.5
        final_mask, _ = climb(mask)
        subset = frozenset(int(v) for v in np.flatnonzero(final_mask))
        value = objective(subset)
        if best is None or value > best[0]:
            best = (value, subset, label)
    return best


def oqc_local(view, alpha=DEFAULT_ALPHA, starts=None, heuristic_set=None):
    """Multi-start local search on the edge-surplus objective."""
    started = time.perf_counter()
    starts = starts if starts is not None else InitPlan()
    if view.total_weight() == 0:
        return DetectionResult(frozenset(), 0.0, "oqc_local", empty=True,
                               elapsed=time.perf_counter() - started)
    if heuristic_set is None:
        heuristic_set = default_heuristic_start(view)
    coeff = view.surplus_coeff * alpha
    w = view.weights.astype(np.int64)
    value, subset, label = _run_starts(
        view, starts, heuristic_set,
        climb=lambda mask: _toggle_search_surplus(w, coeff, mask),
        objective=lambda sub: edge_surplus_objective(view, sub, alpha))
    return DetectionResult(subset, value, "oqc_local", initialization=label,
                           elapsed=time.perf_counter() - started)


# ---------------------------------------------------------------------------
# heuristic initializations
# ---------------------------------------------------------------------------

def heuristic_start_uni(graph: UniGraph):
    """Vertex with the best triangle-to-degree ratio on the reciprocal
    projection, together with its projection neighbours."""
    proj = graph.reciprocal_projection().astype(np.int64)
    if proj.shape[0] == 0:
        raise ConfigError("empty graph")
    deg = proj.sum(axis=1)
    tri = ((proj @ proj) * proj).sum(axis=1) // 2
    scores = np.divide(tri, deg, out=np.zeros(graph.n, dtype=float), where=deg > 0)
    center = int(np.argmax(scores))
    return frozenset([center]) | {int(v) for v in np.flatnonzero(proj[center])}


def heuristic_start_bi(bigraph: BiGraph):
    """Vertex on the most bid-author-bid-author cycles per unit of
    bid+authorship degree, with its bid/authorship neighbours.

    Vertices index reviewers first, then papers.
    """
    b = bigraph.bid.astype(np.int64)
    a = bigraph.author.astype(np.int64)
    n_r, n_p = b.shape
    if n_r == 0 or n_p == 0:
        raise ConfigError("empty graph")
    m1 = b @ a.T  # m1[r1, r2]: papers of r2 that r1 bid on
    rev_cycles = (m1 * m1.T).sum(axis=1)
    pap_cycles = ((a.T @ m1) * b.T).sum(axis=1)
    rev_deg = b.sum(axis=1) + a.sum(axis=1)
    pap_deg = b.sum(axis=0) + a.sum(axis=0)
    cycles = np.concatenate([rev_cycles, pap_cycles]).astype(float)
    deg = np.concatenate([rev_deg, pap_deg])
    scores = np.divide(cycles, deg, out=np.zeros(n_r + n_p, dtype=float), where=deg > 0)
    center = int(np.argmax(scores))
    adj = b + a
    if center < n_r:
        neighbours = {int(p) + n_r for p in np.flatnonzero(adj[center])}
    else:
        neighbours = {int(r) for r in np.flatnonzero(adj[:, center - n_r])}
    return frozenset([center]) | neighbours


def default_heuristic_start(view):
    """Triangle-ratio start computed directly on a view's weight matrix."""
    proj = (view.weights >= view.reciprocal_threshold).astype(np.int64)
    deg = proj.sum(axis=1)
    tri = ((proj @ proj) * proj).sum(axis=1) // 2
    scores = np.divide(tri, deg, out=np.zeros(view.n, dtype=float), where=deg > 0)
    center = int(np.argmax(scores))
    return frozenset([center]) | {int(v) for v in np.flatnonzero(proj[center])}


# ---------------------------------------------------------------------------
# telltail
# ---------------------------------------------------------------------------

def _toggle_search_telltail(w, tail, start_mask):
    """Hill-climb toggles on F_GP(adjusted mass).

    Improvement comparisons run on the survival function, which stays
    strictly ordered far into the tail where the CDF saturates to 1;
    equal scores refuse the move.  `w` must be a signed integer matrix.
    """
    m = int(w.sum()) // 2
    deg_global = w.sum(axis=1).astype(np.float64)
    degsq = deg_global ** 2
    mask = start_mask.copy()
    deg_s = w[:, mask].sum(axis=1).astype(np.float64)
    e = float(w[np.ix_(mask, mask)].sum()) / 2.0
    dsum = float(deg_global[mask].sum())
    qsum = float(degsq[mask].sum())

    def mass(e_, dsum_, qsum_):
        return e_ - (dsum_ ** 2 - qsum_) / (4.0 * m)

    sf_cur = float(tail.sf(mass(e, dsum, qsum)))
    while True:
        mass_add = mass(e + deg_s, dsum + deg_global, qsum + degsq)
        mass_rem = mass(e - deg_s, dsum - deg_global, qsum - degsq)
        cand_mass = np.where(mask, mass_rem, mass_add)
        cand_sf = tail.sf(cand_mass)
        best = int(np.argmin(cand_sf))
        if not cand_sf[best] < sf_cur:
            return mask, sf_cur
        delta = -1.0 if mask[best] else 1.0
        e += delta * deg_s[best]
        dsum += delta * deg_global[best]
        qsum += delta * degsq[best]
        mask[best] = not mask[best]
        deg_s = deg_s + delta * w[best]
        sf_cur = float(cand_sf[best])


def telltail(view, tail=None, starts=None, heuristic_set=None):
    """Multi-start local search on the tail score of adjusted edge mass."""
    started = time.perf_counter()
    tail = tail if tail is not None else GPTail()
    starts = starts if starts is not None else InitPlan()
    if view.total_weight() == 0:
        return DetectionResult(frozenset(), 0.0, "telltail", empty=True,
                               elapsed=time.perf_counter() - started)
    if heuristic_set is None:
        heuristic_set = default_heuristic_start(view)
    w = view.weights.astype(np.int64)
    best = None
    for index, label in enumerate(starts.labels()):
        mask = np.zeros(view.n, dtype=bool)
        if label == "heuristic":
            mask[list(heuristic_set)] = True
        else:
            mask = starts.random_rng(index).random(view.n) < 0.5
        final_mask, sf_value = _toggle_search_telltail(w, tail, mask)
        subset = frozenset(int(v) for v in np.flatnonzero(final_mask))
        if best is None or sf_value < best[0]:
            best = (sf_value, subset, label)
    _, subset, label = best
    return DetectionResult(subset, telltail_objective(view, subset, tail), "telltail",
                           initialization=label, elapsed=time.perf_counter() - started)


# ---------------------------------------------------------------------------
# fraudar
# ---------------------------------------------------------------------------

def fraudar(view):
    """Greedy weighted peeling of the bipartite graph; best prefix wins.

    Each step removes the vertex whose incident weighted edge mass is
    smallest (lowest index on ties), maximizing g(S)/|S| over the
    visited prefixes.
    """
    started = time.perf_counter()
    if view.n_rev >= view.n:
        raise ConfigError("fraudar requires a bipartite view")
    if view.total_weight() == 0:
        return DetectionResult(frozenset(), 0.0, "fraudar", empty=True,
                               elapsed=time.perf_counter() - started)
    col = _fraudar_column_weights(view)
    n = view.n
    neighbours = [np.flatnonzero(view.weights[v]) for v in range(n)]
    wdeg = np.array([col[neighbours[v]].sum() if v < view.n_rev
                     else col[v] * neighbours[v].size for v in range(n)])
    version = np.zeros(n, dtype=np.int64)
    heap = [(wdeg[v], v, 0) for v in range(n)]
    heapq.heapify(heap)
    alive = np.ones(n, dtype=bool)
    g = float(wdeg[view.n_rev:].sum())  # paper-side mass counts each edge once
    size = n
    best_f, best_step = g / size, 0
    removal_order = []
    while size > 1:
        while True:
            value, victim, ver = heapq.heappop(heap)
            if alive[victim] and ver == version[victim]:
                break
        alive[victim] = False
        g -= float(wdeg[victim])
        size -= 1
        removal_order.append(victim)
        for u in neighbours[victim]:
            if not alive[u]:
                continue
            wdeg[u] -= col[victim] if victim >= view.n_rev else col[u]
            version[u] += 1
            heapq.heappush(heap, (wdeg[u], u, version[u]))
        f = g / size
        if f > best_f:
            best_f, best_step = f, len(removal_order)
    subset = frozenset(range(n)) - frozenset(removal_order[:best_step])
    return DetectionResult(subset, fraudar_objective(view, subset), "fraudar",
                           elapsed=time.perf_counter() - started)


# ---------------------------------------------------------------------------
# oqc specialized to the labelled bipartite graph
# ---------------------------------------------------------------------------

class _BoxSurplusState:
    """Incremental evaluation of the bid-surplus objective over reviewer
    subsets, with vectorized one-toggle lookahead."""

    def __init__(self, bigraph, alpha):
        self.b = bigraph.bid.astype(np.int64)
        self.a = bigraph.author.astype(np.int64)
        self.c = bigraph.conflict.astype(np.int64)
        self.alpha = alpha
        self.n_rev = bigraph.n_reviewers

    def set_mask(self, mask):
        self.mask = mask.copy()
        self.cnt = self.a[mask].sum(axis=0) if mask.any() else np.zeros(self.a.shape[1], np.int64)
        self.ps = self.cnt > 0
        self.col_b = self.b[mask].sum(axis=0) if mask.any() else np.zeros_like(self.cnt)
        self.col_c = self.c[mask].sum(axis=0) if mask.any() else np.zeros_like(self.cnt)
        self.s = int(mask.sum())
        self.n_ps = int(self.ps.sum())
        self.b_box = int(self.col_b[self.ps].sum())
        self.a_box = int(self.cnt[self.ps].sum())
        self.c_box = int(self.col_c[self.ps].sum())

    def objective(self):
        return self.b_box - self.alpha * (self.s * self.n_ps - self.a_box - self.c_box)

    def candidate_objectives(self):
        """Objective after toggling each reviewer, as one vector."""
        ps, free = self.ps, ~self.ps
        b_in = self.b[:, ps].sum(axis=1)
        a_in = self.a[:, ps].sum(axis=1)
        c_in = self.c[:, ps].sum(axis=1)
        a_free = self.a[:, free]
        gain_ps = a_free.sum(axis=1)
        gain_b = a_free @ self.col_b[free]
        gain_a = a_free @ self.cnt[free]  # other S-authors on newly exposed papers
        gain_c = a_free @ self.col_c[free]
        add_b = self.b_box + b_in + gain_b
        add_a = self.a_box + a_in + gain_a + gain_ps
        add_c = self.c_box + c_in + gain_c
        add_ps = self.n_ps + gain_ps
        f_add = add_b - self.alpha * ((self.s + 1) * add_ps - add_a - add_c)

        only = self.cnt == 1
        a_only = self.a[:, only]
        lose_ps = a_only.sum(axis=1)
        lose_b = a_only @ self.col_b[only]
        lose_c = a_only @ self.col_c[only]
        rem_b = self.b_box - b_in - lose_b
        rem_a = self.a_box - a_in
        rem_c = self.c_box - c_in - lose_c
        rem_ps = self.n_ps - lose_ps
        f_rem = rem_b - self.alpha * ((self.s - 1) * rem_ps - rem_a - rem_c)
        return np.where(self.mask, f_rem, f_add)

    def toggle(self, v):
        mask = self.mask.copy()
        mask[v] = not mask[v]
        self.set_mask(mask)


def oqc_specialized(bigraph, alpha=DEFAULT_ALPHA, starts=None, heuristic_set=None):
    """Multi-start local search over reviewer subsets on the bid surplus."""
    started = time.perf_counter()
    starts = starts if starts is not None else InitPlan()
    if not bigraph.bid.any():
        return DetectionResult(frozenset(), 0.0, "oqc_specialized", empty=True,
                               elapsed=time.perf_counter() - started)
    if heuristic_set is None:
        heuristic_set = {v for v in heuristic_start_bi(bigraph) if v < bigraph.n_reviewers}
    state = _BoxSurplusState(bigraph, alpha)
    n = bigraph.n_reviewers
    best = None
    for index, label in enumerate(starts.labels()):
        mask = np.zeros(n, dtype=bool)
        if label == "heuristic":
            mask[sorted(heuristic_set)] = True
        else:
            mask = starts.random_rng(index).random(n) < 0.5
        state.set_mask(mask)
        f = state.objective()
        while True:
            cand = state.candidate_objectives()
            move = int(np.argmax(cand))
            if not cand[move] > f:
                break
            state.toggle(move)
            f = state.objective()
        subset = frozenset(int(v) for v in np.flatnonzero(state.mask))
        value = oqc_specialized_objective(bigraph, subset, alpha)
        if best is None or value > best[0]:
            best = (value, subset, label)
    value, subset, label = best
    return DetectionResult(subset, value, "oqc_specialized", initialization=label,
                           elapsed=time.perf_counter() - started)


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

def detect_on_uni(graph, algorithm, alpha=DEFAULT_ALPHA, tail=None, starts=None):
    """Run a unipartite-capable detector on a reviewer graph."""
    if algorithm == "dsd":
        return dsd(uni_multigraph_view(graph))
    if algorithm == "oqc_greedy":
        return oqc_greedy(uni_multigraph_view(graph), alpha)
    if algorithm == "oqc_local":
        return oqc_local(uni_multigraph_view(graph), alpha, starts,
                         heuristic_set=heuristic_start_uni(graph))
    if algorithm == "telltail":
        return telltail(uni_reciprocal_view(graph), tail, starts,
                        heuristic_set=heuristic_start_uni(graph))
    raise ConfigError(f"algorithm {algorithm!r} does not run on the unipartite graph")


def detect_on_bi(bigraph, algorithm, alpha=DEFAULT_ALPHA, tail=None, starts=None,
                 edge_choice="bids"):
    """Run a bipartite-capable detector; paper vertices are stripped."""
    if algorithm == "oqc_specialized":
        return oqc_specialized(bigraph, alpha, starts)
    view = bi_view(bigraph, edge_choice)
    heuristic = None
    if algorithm in ("oqc_local", "telltail"):
        heuristic = heuristic_start_bi(bigraph)
    if algorithm == "dsd":
        result = dsd(view)
    elif algorithm == "oqc_greedy":
        result = oqc_greedy(view, alpha)
    elif algorithm == "oqc_local":
        result = oqc_local(view, alpha, starts, heuristic_set=heuristic)
    elif algorithm == "telltail":
        result = telltail(view, tail, starts, heuristic_set=heuristic)
    elif algorithm == "fraudar":
        result = fraudar(view)
    else:
        raise ConfigError(f"algorithm {algorithm!r} does not run on the bipartite graph")
    return DetectionResult(view.reviewer_subset(result.subset), result.objective,
                           result.algorithm, result.initialization, result.elapsed,
                           result.empty)


def run_detection(dataset, algorithm, representation, alpha=DEFAULT_ALPHA, tail=None,
                  starts=None, edge_choice="bids"):
    """Build the requested graph from a dataset and run one detector.

    Returns a reviewer-only result regardless of representation.
    """
    from .bigraph import build_bi
    from .unigraph import build_uni

    if representation == "uni":
        if algorithm not in UNI_ALGORITHMS:
            raise ConfigError(f"({algorithm}, uni) is not a supported combination")
        return detect_on_uni(build_uni(dataset), algorithm, alpha, tail, starts)
    if representation == "bi":
        if algorithm not in BI_ALGORITHMS:
            raise ConfigError(f"({algorithm}, bi) is not a supported combination")
        return detect_on_bi(build_bi(dataset), algorithm, alpha, tail, starts, edge_choice)
    raise ConfigError(f"unknown representation {representation!r}")


def save_results_json(results, path, representation=None, seed=None, reviewers=None):
    """Serialize detection results as a JSON list of records."""
    records = [r.to_json_dict(representation, seed, reviewers) for r in results]
    with open(path, "w") as fh:
        json.dump(records, fh, indent=1)
