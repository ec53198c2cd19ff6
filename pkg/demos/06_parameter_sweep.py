"""Sweep detection accuracy and manipulation payoff over a small grid.

The full replication grids (--paper-grid on the CLI) take hours on the
real datasets; this desk-scale sweep shows the same mechanics and file
formats in under a minute.
"""

from bidring import (
    SweepConfig,
    TextSimModel,
    generate_synthetic_dataset,
    generate_text_similarities,
    sweep_detection,
    sweep_success,
)
from bidring.harness import save_long_csv, save_trial_records, save_wide_csv

dataset = generate_synthetic_dataset(
    n_reviewers=120, n_papers=90, bid_prob=0.03, authors_per_paper=1, rng_seed=21)
dataset = generate_text_similarities(dataset, TextSimModel(), rng_seed=22)

config = SweepConfig(
    representation="uni",
    k_grid=(6, 12),
    density_grid=(0.4, 1.0),
    trials=10,
    algorithms=("dsd", "telltail"),
    master_seed=2024,
    workers=2,
)

rows, records = sweep_detection(config, dataset)
print("detection sweep (mean jaccard, stderr):")
for row in rows:
    print(f"  k={row['k']:2d} density={row['density']:.1f} "
          f"{row['algorithm']:>9}: {row['mean']:.3f} +/- {row['stderr']:.3f}")
save_long_csv(rows, "demo_sweep_detect.csv")
save_wide_csv(rows, "jaccard", "demo_sweep_detect_telltail.csv", algorithm="telltail")
save_trial_records(records, "demo_sweep_detect_trials.jsonl")

success_config = SweepConfig(
    representation="uni",
    k_grid=(6,),
    density_grid=(0.4, 1.0),
    trials=10,
    master_seed=2024,
    workers=2,
)
rows, _ = sweep_success(success_config, dataset)
print("\nmanipulation payoff after assignment:")
for row in rows:
    print(f"  k={row['k']:2d} density={row['density']:.1f} "
          f"{row['metric']:>13}: {row['mean']:.3f} +/- {row['stderr']:.3f}")
save_long_csv(rows, "demo_sweep_success.csv")

print("\nwrote demo_sweep_detect.csv, demo_sweep_detect_telltail.csv,")
print("      demo_sweep_detect_trials.jsonl, demo_sweep_success.csv")
