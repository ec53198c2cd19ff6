"""Collusion-ring bidding simulation and density-based detection."""

from .assign import (
    Assignment,
    jaccard,
    similarity,
    solve_assignment,
    success_metrics,
)
from .bigraph import BiGraph, authored_papers, bid_density, build_bi
from .census import (
    CensusCell,
    PeelFrontier,
    count_bi_groups,
    count_uni_groups,
    peel_bi,
    peel_uni,
)
from .dataset import (
    ConferenceDataset,
    TextSimModel,
    generate_synthetic_dataset,
    generate_text_similarities,
    load_dataset,
    subsample_authorships,
    triple_agreement,
)
from .detect import (
    DetectionResult,
    GPTail,
    InitPlan,
    run_detection,
)
from .harness import SweepConfig, census_grid, sweep_detection, sweep_success
from .inject import CollusionPlan, inject_bi, inject_uni, realize_bids_uni
from .unigraph import UniGraph, build_uni, edge_density, induced_edge_count

__all__ = [
    "Assignment",
    "BiGraph",
    "CensusCell",
    "CollusionPlan",
    "ConferenceDataset",
    "DetectionResult",
    "GPTail",
    "InitPlan",
    "PeelFrontier",
    "SweepConfig",
    "TextSimModel",
    "UniGraph",
    "authored_papers",
    "bid_density",
    "build_bi",
    "build_uni",
    "census_grid",
    "count_bi_groups",
    "count_uni_groups",
    "edge_density",
    "generate_synthetic_dataset",
    "generate_text_similarities",
    "induced_edge_count",
    "inject_bi",
    "inject_uni",
    "jaccard",
    "load_dataset",
    "peel_bi",
    "peel_uni",
    "realize_bids_uni",
    "run_detection",
    "similarity",
    "solve_assignment",
    "subsample_authorships",
    "sweep_detection",
    "sweep_success",
    "triple_agreement",
]
