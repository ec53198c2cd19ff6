"""The two graph views of bidding data and their density measures.

The unipartite graph links reviewer r1 to reviewer r2 when r1 bid on a
paper r2 authored; its edge density is the filled fraction of ordered
pairs.  The bipartite graph keeps reviewers and papers separate with
bid/authorship/conflict edge labels; its bid density is the filled
fraction of pairs that could legally carry a bid.
"""

import numpy as np

from bidring import (
    bid_density,
    build_bi,
    build_uni,
    edge_density,
    generate_synthetic_dataset,
)

dataset = generate_synthetic_dataset(
    n_reviewers=40, n_papers=30, bid_prob=0.15, authors_per_paper=2, rng_seed=3)

uni = build_uni(dataset)
print(f"unipartite graph: {uni.n} reviewers, {uni.n_edges} directed edges")
reciprocal = int(uni.reciprocal_projection().sum()) // 2
print(f"mutual pairs (bids in both directions): {reciprocal}")

authors = [int(a) for a in dataset.author_reviewers()]
group = authors[:6]
print(f"\nexample author group {group}:")
print(f"  edge density gamma = {edge_density(uni, group):.3f}")

bi = build_bi(dataset)
print(f"\nbipartite graph: {bi.n_reviewers} reviewers x {bi.n_papers} papers")
print(f"  bid edges:      {int(bi.bid.sum())}")
print(f"  author edges:   {int(bi.author.sum())}")
print(f"  conflict edges: {int(bi.conflict.sum())} (non-authorship conflicts)")
print(f"  bid density eta of the group = {bid_density(bi, group):.3f}")

# Density responds only to structure inside the group box.
denser = bi.with_added_bids([
    (r, p) for r in group for p in np.flatnonzero(bi.author[group].any(axis=0))
    if not (bi.bid[r, p] or bi.author[r, p] or bi.conflict[r, p])])
print(f"  ... after filling every legal pair: {bid_density(denser, group):.3f}")

uni.save_edge_csv("demo_uni_edges.csv", reviewers=dataset.reviewers)
bi.save_edge_csv("demo_bi_edges.csv", dataset.reviewers, dataset.papers)
print("\nwrote demo_uni_edges.csv and demo_bi_edges.csv")
