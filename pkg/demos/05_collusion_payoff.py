"""From planted ring to manipulated paper assignment.

Injects a ring into the reviewer graph, rewrites the colluders' bids to
realize that graph (full bidding inside the ring, one surviving bid per
targeted honest author), solves the maximum-similarity assignment, and
measures what the colluders got out of it.
"""

from bidring import (
    TextSimModel,
    build_uni,
    generate_synthetic_dataset,
    generate_text_similarities,
    inject_uni,
    realize_bids_uni,
    similarity,
    solve_assignment,
    success_metrics,
)

dataset = generate_synthetic_dataset(
    n_reviewers=80, n_papers=50, bid_prob=0.08, authors_per_paper=1, rng_seed=5)
dataset = generate_text_similarities(dataset, TextSimModel(), rng_seed=6)

graph = build_uni(dataset)
target, plan = inject_uni(graph, dataset.author_reviewers(), k=8, gamma=1.0, seed=9)
print(f"colluders: {sorted(plan.colluders)}")

realized = realize_bids_uni(dataset, target, plan, seed=9)
added = int((realized.bid & ~dataset.bid).sum())
removed = int((dataset.bid & ~realized.bid).sum())
print(f"bid edits: +{added} ring bids, -{removed} outside bids trimmed")

# Honest baseline assignment vs the manipulated one.
for label, data in (("honest", dataset), ("manipulated", realized)):
    assignment = solve_assignment(similarity(data), data.conflict,
                                  paper_load=3, reviewer_cap=6)
    paper_frac, colluder_frac = success_metrics(assignment, plan, data)
    print(f"\n{label} bids -> assignment objective {assignment.objective:.2f}")
    print(f"  target papers with a colluder assigned: {paper_frac:.0%}")
    print(f"  colluders with a colluder on their paper: {colluder_frac:.0%}")
