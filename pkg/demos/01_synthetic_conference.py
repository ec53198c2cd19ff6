"""Build a synthetic conference and validate its text similarities.

Generates reviewers, papers, authorships, and random positive bids,
then attaches Gaussian text-similarity scores whose triple-agreement
statistics hit the configured targets.
"""

import numpy as np

from bidring import TextSimModel, generate_synthetic_dataset, generate_text_similarities, triple_agreement
from bidring.dataset import LEVEL_MAYBE, LEVEL_YES

# A mid-sized conference: 300 reviewers, 120 papers, each paper written
# by one reviewer, and a 40% chance that a reviewer bids on any paper
# they are not conflicted with.
dataset = generate_synthetic_dataset(
    n_reviewers=300, n_papers=120, bid_prob=0.40, authors_per_paper=1,
    rng_seed=7, yes_frac=0.5)
print(f"reviewers: {dataset.n_reviewers}")
print(f"papers:    {dataset.n_papers}")
print(f"bids:      {int(dataset.bid.sum())} "
      f"(yes: {int((dataset.bid_level == LEVEL_YES).sum())}, "
      f"maybe: {int((dataset.bid_level == LEVEL_MAYBE).sum())})")
print(f"authors:   {len(dataset.author_reviewers())} reviewers wrote >= 1 paper")

# Similarities are drawn per bid level. The level means are placed so
# that a positive-bid paper outranks a no-bid paper 80% of the time and
# a Yes paper outranks a Maybe paper 62% of the time.
model = TextSimModel(base_mean=0.030, sigma=0.05, p_easy=0.80, p_hard=0.62)
dataset = generate_text_similarities(dataset, model, rng_seed=8)
print(f"\nsimilarity range: [{dataset.text_sim.min():.3f}, {dataset.text_sim.max():.3f}]")

easy = triple_agreement(dataset, {LEVEL_YES, LEVEL_MAYBE}, {0})
hard = triple_agreement(dataset, {LEVEL_YES}, {LEVEL_MAYBE})
print(f"positive-vs-none agreement: {easy:.3f}  (target 0.80)")
print(f"yes-vs-maybe agreement:     {hard:.3f}  (target 0.62)")

# Round-trip through the flat CSV triplet format.
dataset.save_csv("demo_conference.csv")
print("\nwrote demo_conference.csv (kind,reviewer,paper,value triplets)")
