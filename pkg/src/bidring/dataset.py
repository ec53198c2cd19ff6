"""Conference bidding data model, file formats, and synthetic generation.

A dataset holds reviewers, papers, positive bids (with their declared
strength level), authorships, conflicts of interest, and an optional
text-similarity matrix.  Structural invariants are enforced at
construction time: authorships are conflicts, bids never fall on
conflicted pairs, and similarities live in [0, 1].
"""

from __future__ import annotations

import csv
import json
import re
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.stats import norm

from .errors import ConfigError, DataFormatError, InvariantError

# Bid strength levels. 0 always means "no positive bid"; categorical
# loaders map Maybe -> 1 and Yes -> 2, numeric loaders keep 1..3.
LEVEL_NONE = 0
LEVEL_MAYBE = 1
LEVEL_YES = 2


@dataclass(frozen=True)
class ConferenceDataset:
    """Immutable bidding data for one conference.

    Matrices are indexed [reviewer, paper] with dense integer indices;
    `reviewers` and `papers` map indices back to opaque identifiers.
    `conflict` is the full conflict set (it contains `author`).
    `text_sim` is None until similarities are loaded or generated.
    """

    reviewers: tuple
    papers: tuple
    bid_level: np.ndarray  # int8, 0 = no bid
    author: np.ndarray  # bool
    conflict: np.ndarray  # bool, superset of author
    text_sim: np.ndarray | None = None  # float64 in [0, 1]

    def __post_init__(self):
        n_r, n_p = len(self.reviewers), len(self.papers)
        for name in ("bid_level", "author", "conflict"):
            mat = getattr(self, name)
            if mat.shape != (n_r, n_p):
                raise InvariantError(f"{name} has shape {mat.shape}, expected {(n_r, n_p)}")
        if self.text_sim is not None and self.text_sim.shape != (n_r, n_p):
            raise InvariantError("text_sim shape does not match dataset")
        if len(set(self.reviewers)) != n_r or len(set(self.papers)) != n_p:
            raise InvariantError("duplicate reviewer or paper identifiers")
        bad = self.author & ~self.conflict
        if bad.any():
            r, p = np.argwhere(bad)[0]
            raise InvariantError(f"authorship without conflict: ({self.reviewers[r]}, {self.papers[p]})")
        bad = (self.bid_level > 0) & self.conflict
        if bad.any():
            r, p = np.argwhere(bad)[0]
            raise InvariantError(f"pair both bid and conflicted: ({self.reviewers[r]}, {self.papers[p]})")
        if self.text_sim is not None:
            if not np.all((self.text_sim >= 0.0) & (self.text_sim <= 1.0)):
                raise InvariantError("text similarities outside [0, 1]")
        for name in ("bid_level", "author", "conflict", "text_sim"):
            mat = getattr(self, name)
            if mat is not None:
                mat.setflags(write=False)

    # -- basic queries ---------------------------------------------------

    @property
    def n_reviewers(self):
        return len(self.reviewers)

    @property
    def n_papers(self):
        return len(self.papers)

    @property
    def bid(self):
        """Boolean bid matrix (levels collapsed to membership)."""
        return self.bid_level > 0

    def bid_pairs(self):
        """Positive bids as a set of (reviewer_idx, paper_idx) pairs."""
        return {(int(r), int(p)) for r, p in np.argwhere(self.bid_level > 0)}

    def author_pairs(self):
        return {(int(r), int(p)) for r, p in np.argwhere(self.author)}

    def conflict_pairs(self):
        return {(int(r), int(p)) for r, p in np.argwhere(self.conflict)}

    def author_reviewers(self):
        """Indices of reviewers with at least one authored paper."""
        return np.flatnonzero(self.author.any(axis=1))

    # -- derived copies --------------------------------------------------

    def with_text_sim(self, text_sim):
        return ConferenceDataset(self.reviewers, self.papers, self.bid_level,
                                 self.author, self.conflict, np.asarray(text_sim, dtype=float))

    def with_bid_level(self, bid_level):
        return ConferenceDataset(self.reviewers, self.papers,
                                 np.asarray(bid_level, dtype=np.int8),
                                 self.author, self.conflict, self.text_sim)

    def with_authorships(self, author):
        return ConferenceDataset(self.reviewers, self.papers, self.bid_level,
                                 np.asarray(author, dtype=bool), self.conflict, self.text_sim)

    # -- serialization ---------------------------------------------------

    def save_csv(self, path):
        """Write the flat `kind,reviewer,paper,value` triplet file.

        Zero text similarities are implicit, so save/load round-trips
        exactly without writing the full similarity matrix.
        """
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["kind", "reviewer", "paper", "value"])
            for r in range(self.n_reviewers):
                writer.writerow(["reviewer", self.reviewers[r], "", ""])
            for p in range(self.n_papers):
                writer.writerow(["paper", "", self.papers[p], ""])
            for r, p in np.argwhere(self.bid_level > 0):
                writer.writerow(["bid", self.reviewers[r], self.papers[p],
                                 int(self.bid_level[r, p])])
            for r, p in np.argwhere(self.author):
                writer.writerow(["author", self.reviewers[r], self.papers[p], ""])
            for r, p in np.argwhere(self.conflict & ~self.author):
                writer.writerow(["conflict", self.reviewers[r], self.papers[p], ""])
            if self.text_sim is not None:
                for r, p in np.argwhere(self.text_sim != 0.0):
                    writer.writerow(["textsim", self.reviewers[r], self.papers[p],
                                     format(self.text_sim[r, p], ".17g")])

    def to_json_dict(self, include_text_sim=False):
        out = {
            "reviewers": list(self.reviewers),
            "papers": list(self.papers),
            "bids": sorted([self.reviewers[r], self.papers[p], int(self.bid_level[r, p])]
                           for r, p in np.argwhere(self.bid_level > 0)),
            "authorships": sorted([self.reviewers[r], self.papers[p]]
                                  for r, p in np.argwhere(self.author)),
            "conflicts": sorted([self.reviewers[r], self.papers[p]]
                                for r, p in np.argwhere(self.conflict)),
        }
        if include_text_sim and self.text_sim is not None:
            out["text_sim"] = self.text_sim.tolist()
        return out

    def save_json(self, path, include_text_sim=False):
        with open(path, "w") as fh:
            json.dump(self.to_json_dict(include_text_sim), fh, indent=1)


def _build(reviewers, papers, bid_level_pairs, author_pairs, conflict_pairs, textsim_pairs=None):
    """Assemble a dataset from id-keyed pair collections."""
    rev_idx = {r: i for i, r in enumerate(reviewers)}
    pap_idx = {p: i for i, p in enumerate(papers)}
    n_r, n_p = len(reviewers), len(papers)
    bid_level = np.zeros((n_r, n_p), dtype=np.int8)
    author = np.zeros((n_r, n_p), dtype=bool)
    conflict = np.zeros((n_r, n_p), dtype=bool)
    for (r, p), lvl in bid_level_pairs.items():
        bid_level[rev_idx[r], pap_idx[p]] = lvl
    for r, p in author_pairs:
        author[rev_idx[r], pap_idx[p]] = True
        conflict[rev_idx[r], pap_idx[p]] = True  # authorship implies conflict
    for r, p in conflict_pairs:
        conflict[rev_idx[r], pap_idx[p]] = True
    text_sim = None
    if textsim_pairs:
        text_sim = np.zeros((n_r, n_p), dtype=float)
        for (r, p), v in textsim_pairs.items():
            text_sim[rev_idx[r], pap_idx[p]] = v
    return ConferenceDataset(tuple(reviewers), tuple(papers), bid_level, author, conflict, text_sim)


# ---------------------------------------------------------------------------
# loaders
# ---------------------------------------------------------------------------

_LEVEL_NAMES = {"yes": LEVEL_YES, "maybe": LEVEL_MAYBE}


def load_dataset(path, format):
    """Load a dataset file. `format` is 'csv-triplets' or 'preflib-categorical'."""
    if format == "csv-triplets":
        return load_csv_triplets(path)
    if format == "preflib-categorical":
        return load_preflib(path)
    raise ConfigError(f"unknown dataset format: {format!r}")


def _parse_level(value, where):
    value = value.strip().lower()
    if value == "":
        return LEVEL_YES
    if value in _LEVEL_NAMES:
        return _LEVEL_NAMES[value]
    try:
        lvl = int(value)
    except ValueError:
        raise DataFormatError(f"{where}: bad bid level {value!r}") from None
    if not 1 <= lvl <= 127:
        raise DataFormatError(f"{where}: bid level out of range: {lvl}")
    return lvl


def load_csv_triplets(path):
    """Read the flat `kind,reviewer,paper[,value]` triplet format.

    Kinds: reviewer, paper (declarations), bid (value = level name or
    integer, default Yes), author, conflict, textsim (value = float).
    Authorship rows imply conflict rows.
    """
    reviewers, papers = [], []
    seen_r, seen_p = set(), set()
    bid_levels, authors, conflicts, textsims = {}, set(), set(), {}

    def touch(r=None, p=None):
        if r is not None and r not in seen_r:
            seen_r.add(r)
            reviewers.append(r)
        if p is not None and p not in seen_p:
            seen_p.add(p)
            papers.append(p)

    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or (lineno == 1 and row[0].strip().lower() == "kind"):
                continue
            row = [c.strip() for c in row] + [""] * (4 - len(row))
            kind, r, p, value = row[:4]
            where = f"{path}:{lineno}"
            if kind == "reviewer":
                touch(r=r)
            elif kind == "paper":
                touch(p=p)
            elif kind == "bid":
                touch(r, p)
                bid_levels[(r, p)] = _parse_level(value, where)
            elif kind == "author":
                touch(r, p)
                authors.add((r, p))
            elif kind == "conflict":
                touch(r, p)
                conflicts.add((r, p))
            elif kind == "textsim":
                touch(r, p)
                try:
                    textsims[(r, p)] = float(value)
                except ValueError:
                    raise DataFormatError(f"{where}: bad textsim value {value!r}") from None
            else:
                raise DataFormatError(f"{where}: unknown kind {kind!r}")
    try:
        return _build(reviewers, papers, bid_levels, authors, conflicts, textsims)
    except InvariantError as err:
        raise InvariantError(f"{path}: {err}") from None


def load_preflib(path):
    """Read a PrefLib categorical bidding export.

    Header lines declare alternative (paper) and category names; each
    data line is `multiplicity: {set}, {set}, ...` with one set per
    category, alternatives as 1-based integers.  Categories named
    yes/maybe become positive bids, conflict becomes a conflict pair,
    and anything else (e.g. no response) is ignored.  Multiplicities
    expand into that many identical reviewers.
    """
    n_alternatives = None
    n_voters = None
    categories = {}
    data_lines = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line.lstrip("#").strip()
                if ":" not in body:
                    continue
                key, _, value = body.partition(":")
                key, value = key.strip().upper(), value.strip()
                if key == "NUMBER ALTERNATIVES":
                    n_alternatives = int(value)
                elif key == "NUMBER VOTERS":
                    n_voters = int(value)
                elif key.startswith("CATEGORY NAME"):
                    idx = int(key.rsplit(None, 1)[1])
                    categories[idx] = value
                continue
            if ":" not in line:
                raise DataFormatError(f"{path}:{lineno}: expected 'multiplicity: sets'")
            data_lines.append((lineno, line))
    if n_alternatives is None:
        raise DataFormatError(f"{path}: missing NUMBER ALTERNATIVES header")
    if not categories:
        raise DataFormatError(f"{path}: missing CATEGORY NAME headers")

    cat_actions = {}
    for idx, name in categories.items():
        low = name.strip().lower()
        if low == "yes":
            cat_actions[idx] = ("bid", LEVEL_YES)
        elif low == "maybe":
            cat_actions[idx] = ("bid", LEVEL_MAYBE)
        elif low == "conflict":
            cat_actions[idx] = ("conflict", None)
        else:
            cat_actions[idx] = ("ignore", None)

    papers = [f"p{i + 1}" for i in range(n_alternatives)]
    reviewers = []
    bid_levels, conflicts = {}, set()
    for lineno, line in data_lines:
        mult_str, _, rest = line.partition(":")
        try:
            mult = int(mult_str)
        except ValueError:
            raise DataFormatError(f"{path}:{lineno}: bad multiplicity {mult_str!r}") from None
        groups = []
        pos = 0
        for m in re.finditer(r"\{([^{}]*)\}", rest):
            groups.append(m.group(1))
            pos = m.end()
        if not groups:  # bare comma-separated singleton form
            groups = [g for g in rest.split(",")]
        if len(groups) != len(categories):
            raise DataFormatError(
                f"{path}:{lineno}: {len(groups)} sets for {len(categories)} categories")
        per_cat = []
        for g in groups:
            alts = []
            for tok in g.split(","):
                tok = tok.strip()
                if not tok:
                    continue
                a = int(tok)
                if not 1 <= a <= n_alternatives:
                    raise DataFormatError(f"{path}:{lineno}: alternative {a} out of range")
                alts.append(a - 1)
            per_cat.append(alts)
        for _ in range(mult):
            rid = f"v{len(reviewers) + 1}"
            reviewers.append(rid)
            for cat_idx in sorted(categories):
                action, level = cat_actions[cat_idx]
                for a in per_cat[cat_idx - 1]:
                    if action == "bid":
                        bid_levels[(rid, papers[a])] = level
                    elif action == "conflict":
                        conflicts.add((rid, papers[a]))
    if n_voters is not None and len(reviewers) != n_voters:
        raise DataFormatError(
            f"{path}: header declares {n_voters} voters, parsed {len(reviewers)}")
    try:
        return _build(reviewers, papers, bid_levels, set(), conflicts)
    except InvariantError as err:
        raise InvariantError(f"{path}: {err}") from None


def load_s2orc_npz(path):
    """Read a corpus-bidding export stored as an .npz archive.

    Expected keys: `bid_level` (reviewers x papers int, 0..3),
    `text_sim` (same shape, floats in [0, 1]), `author_pairs`
    (N x 2 ints), optional `reviewer_ids` / `paper_ids`.  Conflicts are
    exactly the authorships; bids on self-authored papers are discarded.

    Returns (dataset, n_self_bids_discarded).
    """
    with np.load(path, allow_pickle=False) as archive:
        bid_level = np.asarray(archive["bid_level"], dtype=np.int8)
        text_sim = np.asarray(archive["text_sim"], dtype=float)
        pairs = np.asarray(archive["author_pairs"], dtype=int)
        n_r, n_p = bid_level.shape
        if "reviewer_ids" in archive:
            reviewers = tuple(str(x) for x in archive["reviewer_ids"])
        else:
            reviewers = tuple(f"r{i}" for i in range(n_r))
        if "paper_ids" in archive:
            papers = tuple(str(x) for x in archive["paper_ids"])
        else:
            papers = tuple(f"p{j}" for j in range(n_p))
    author = np.zeros((n_r, n_p), dtype=bool)
    author[pairs[:, 0], pairs[:, 1]] = True
    self_bids = (bid_level > 0) & author
    n_discarded = int(self_bids.sum())
    bid_level = bid_level.copy()
    bid_level[self_bids] = 0
    dataset = ConferenceDataset(reviewers, papers, bid_level, author, author.copy(),
                                np.clip(text_sim, 0.0, 1.0))
    return dataset, n_discarded


# ---------------------------------------------------------------------------
# synthetic construction
# ---------------------------------------------------------------------------

def subsample_authorships(dataset, per_paper, rng_seed):
    """Rebuild authorships by sampling conflicts uniformly per paper.

    Each paper gets min(per_paper, available) of its conflict pairs as
    authors; conflicts themselves are untouched, so authorships remain
    a subset of conflicts.
    """
    rng = np.random.default_rng(rng_seed)
    author = np.zeros_like(dataset.author)
    for p in range(dataset.n_papers):
        candidates = np.flatnonzero(dataset.conflict[:, p])
        if candidates.size == 0:
            continue
        take = min(per_paper, candidates.size)
        chosen = rng.choice(candidates, size=take, replace=False)
        author[chosen, p] = True
    return dataset.with_authorships(author)


def generate_synthetic_dataset(n_reviewers, n_papers, bid_prob, authors_per_paper,
                               rng_seed, yes_frac=0.5):
    """Generate a desk-scale random conference.

    Authorships are spread round-robin over a seeded reviewer
    permutation (conflicts equal authorships); every non-conflicted
    pair becomes a positive bid independently with probability
    `bid_prob`, labelled Yes with probability `yes_frac`, else Maybe.
    """
    if authors_per_paper > n_reviewers:
        raise ConfigError(
            f"cannot place {authors_per_paper} distinct authors among {n_reviewers} reviewers")
    if not 0.0 <= bid_prob <= 1.0:
        raise ConfigError(f"bid_prob must be a probability, got {bid_prob}")
    rng = np.random.default_rng(rng_seed)
    reviewers = tuple(f"r{i:04d}" for i in range(n_reviewers))
    papers = tuple(f"p{j:04d}" for j in range(n_papers))
    author = np.zeros((n_reviewers, n_papers), dtype=bool)
    perm = rng.permutation(n_reviewers)
    for j in range(n_papers):
        for a in range(authors_per_paper):
            author[perm[(j * authors_per_paper + a) % n_reviewers], j] = True
    conflict = author.copy()
    bid = (rng.random((n_reviewers, n_papers)) < bid_prob) & ~conflict
    bid_level = np.zeros((n_reviewers, n_papers), dtype=np.int8)
    is_yes = rng.random((n_reviewers, n_papers)) < yes_frac
    bid_level[bid & is_yes] = LEVEL_YES
    bid_level[bid & ~is_yes] = LEVEL_MAYBE
    return ConferenceDataset(reviewers, papers, bid_level, author, conflict)


# ---------------------------------------------------------------------------
# text similarities
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TextSimModel:
    """Gaussian model for synthetic reviewer-paper text similarities.

    All levels share the standard deviation `sigma`; the no-bid level is
    centred at `base_mean` and the Maybe/Yes means are placed so that
    fresh draws order a positive-bid paper above a no-bid paper with
    probability `p_easy`, and a Yes paper above a Maybe paper with
    probability `p_hard`.
    """

    base_mean: float = 0.030
    sigma: float = 0.05
    p_easy: float = 0.80
    p_hard: float = 0.62

    def __post_init__(self):
        if self.sigma < 0:
            raise ConfigError("sigma must be nonnegative")
        if not 0.5 <= self.p_hard <= self.p_easy < 1.0:
            raise ConfigError("need 0.5 <= p_hard <= p_easy < 1")

    def level_means(self, yes_weight=0.5):
        """Means for levels (none, maybe, yes).

        `yes_weight` is the fraction of positive bids that are Yes; the
        positive-vs-none target is enforced for the Yes/Maybe mixture
        at these weights, and the Yes-vs-Maybe gap is the pairwise
        Gaussian offset for `p_hard`.
        """
        if self.sigma == 0.0:
            return self.base_mean, self.base_mean, self.base_mean
        scale = self.sigma * np.sqrt(2.0)
        gap = float(norm.ppf(self.p_hard))  # (mu_yes - mu_maybe) / scale
        w_yes = min(max(yes_weight, 0.0), 1.0)
        w_maybe = 1.0 - w_yes
        if w_yes == 0.0 or w_maybe == 0.0:
            # single positive level: pairwise offset solves the target exactly
            t = float(norm.ppf(self.p_easy)) - (gap if w_yes == 1.0 else 0.0)
        else:
            def mix(t):
                return w_maybe * norm.cdf(t) + w_yes * norm.cdf(t + gap) - self.p_easy

            lo, hi = -10.0, 10.0
            t = float(brentq(mix, lo, hi))
        mu_maybe = self.base_mean + scale * t
        mu_yes = mu_maybe + scale * gap
        return self.base_mean, mu_maybe, mu_yes


def sample_similarity_draws(dataset, model, rng_seed):
    """Raw (unclamped) Gaussian similarity draws for every pair.

    The draw for a pair uses the Gaussian of its bid level; conflicted
    pairs (which carry no bid) draw from the no-bid level.
    """
    rng = np.random.default_rng(rng_seed)
    positive = dataset.bid_level > 0
    n_pos = int(positive.sum())
    yes_weight = float((dataset.bid_level == LEVEL_YES).sum() / n_pos) if n_pos else 1.0
    mu_none, mu_maybe, mu_yes = model.level_means(yes_weight)
    means = np.full(dataset.bid_level.shape, mu_none)
    means[dataset.bid_level == LEVEL_MAYBE] = mu_maybe
    means[dataset.bid_level >= LEVEL_YES] = mu_yes
    return means + model.sigma * rng.standard_normal(dataset.bid_level.shape)


def generate_text_similarities(dataset, model, rng_seed):
    """Attach synthetic text similarities, clamped into [0, 1]."""
    draws = sample_similarity_draws(dataset, model, rng_seed)
    return dataset.with_text_sim(np.clip(draws, 0.0, 1.0))


def triple_agreement(dataset, high_levels, low_levels, sample=None, rng_seed=0):
    """Fraction of (reviewer, high paper, low paper) triples ordered correctly.

    A triple agrees when the similarity on the high-level paper is >=
    the similarity on the low-level paper.  Conflicted pairs carry no
    level and never enter triples.  Counting is exact via per-reviewer
    sorting unless `sample` is given, in which case that many triples
    are drawn uniformly with replacement.
    """
    if dataset.text_sim is None:
        raise ConfigError("dataset has no text similarities")
    return triple_agreement_matrix(dataset.bid_level, dataset.text_sim, high_levels,
                                   low_levels, conflict=dataset.conflict,
                                   sample=sample, rng_seed=rng_seed)


def triple_agreement_matrix(levels, values, high_levels, low_levels, conflict=None,
                            sample=None, rng_seed=0):
    """`triple_agreement` on raw level/value matrices (e.g. unclamped draws)."""
    high_mask = np.isin(levels, list(high_levels))
    low_mask = np.isin(levels, list(low_levels))
    if conflict is not None:
        high_mask &= ~conflict
        low_mask &= ~conflict
    highs = [values[r][high_mask[r]] for r in range(levels.shape[0])]
    lows = [values[r][low_mask[r]] for r in range(levels.shape[0])]
    totals = np.array([h.size * l.size for h, l in zip(highs, lows)], dtype=np.int64)
    n_triples = int(totals.sum())
    if n_triples == 0:
        raise ConfigError("no triples match the given level sets")
    if sample is not None and sample < n_triples:
        rng = np.random.default_rng(rng_seed)
        weights = totals / n_triples
        picks = rng.choice(len(totals), size=sample, p=weights)
        agree = 0
        counts = np.bincount(picks, minlength=len(totals))
        for r, c in enumerate(counts):
            if c == 0:
                continue
            h = rng.choice(highs[r], size=c)
            l = rng.choice(lows[r], size=c)
            agree += int((h >= l).sum())
        return agree / sample
    agree = 0
    for h, l in zip(highs, lows):
        if h.size == 0 or l.size == 0:
            continue
        sorted_l = np.sort(l)
        agree += int(np.searchsorted(sorted_l, h, side="right").sum())
    return agree / n_triples
