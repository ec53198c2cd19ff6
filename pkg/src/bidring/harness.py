"""Seeded experiment sweeps over (group size, density) grids.

Per-trial randomness derives from (master seed, k, density, trial
index) alone, so adding or removing detectors never perturbs the
injections, and rerunning any cell reproduces it bit-for-bit.
Trials may run on a process pool; records are reduced in trial order,
so the emitted tables are identical for any worker count.
"""

from __future__ import annotations

import csv
import hashlib
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .assign import similarity, solve_assignment, success_metrics, jaccard
from .bigraph import build_bi
from .census import count_bi_groups, count_uni_groups
from .detect import DEFAULT_ALPHA, GPTail, InitPlan, detect_on_bi, detect_on_uni
from .errors import ConfigError, InfeasibleAssignmentError
from .inject import apply_bi_plan, inject_bi, inject_uni, realize_bids_uni
from .unigraph import build_uni

DEFAULT_TRIALS = 50

# Replication presets: group sizes and density grids matching the
# published sweep axes.
PAPER_GRID_K = tuple(range(2, 31, 2))
PAPER_GRID_GAMMA = tuple(round(0.1 * i, 1) for i in range(1, 11))
PAPER_GRID_ETA = tuple(round(0.1 * i, 1) for i in range(2, 11))
PAPER_CENSUS_K_UNI = tuple(range(2, 11))
PAPER_CENSUS_K_BI = tuple(range(2, 6))


@dataclass(frozen=True)
class SweepConfig:
    representation: str  # "uni" | "bi"
    k_grid: tuple
    density_grid: tuple
    trials: int = DEFAULT_TRIALS
    algorithms: tuple = ()
    master_seed: int = 0
    time_budget: float | None = None  # census cells only
    workers: int = 1
    alpha: float = DEFAULT_ALPHA
    edge_choice: str = "bids"
    n_random_starts: int = 10
    # published unipartite replication uses the heuristic start alone for
    # the quasi-clique local search; random starts stay on for the rest
    uni_oqc_local_heuristic_only: bool = True
    tail: GPTail = field(default_factory=GPTail)
    paper_load: int = 3
    reviewer_cap: int = 6

    def __post_init__(self):
        if self.representation not in ("uni", "bi"):
            raise ConfigError(f"unknown representation {self.representation!r}")
        if not self.k_grid or not self.density_grid:
            raise ConfigError("sweep grids must be nonempty")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")

    @classmethod
    def paper_grid(cls, representation, **kwargs):
        density = PAPER_GRID_GAMMA if representation == "uni" else PAPER_GRID_ETA
        return cls(representation, PAPER_GRID_K, density, **kwargs)


@dataclass(frozen=True)
class TrialRecord:
    k: int
    density: float
    trial: int
    seed: int
    jaccard: dict = field(default_factory=dict)  # algorithm -> score
    paper_frac: float | None = None
    colluder_frac: float | None = None
    elapsed: float = 0.0
    plan: dict | None = None
    error: str | None = None

    def to_json_dict(self):
        return {
            "k": self.k, "density": self.density, "trial": self.trial,
            "seed": self.seed, "jaccard": self.jaccard,
            "paper_frac": self.paper_frac, "colluder_frac": self.colluder_frac,
            "elapsed": self.elapsed, "plan": self.plan, "error": self.error,
        }


def trial_seed(master_seed, k, density, trial):
    """Stable 63-bit seed from the cell coordinates and trial index."""
    tag = f"{master_seed}:{k}:{density:.9f}:{trial}".encode()
    return int.from_bytes(hashlib.sha256(tag).digest()[:8], "big") >> 1


def detector_seed(master_seed, k, density, trial, algorithm):
    """Detector randomness independent of the other configured detectors."""
    tag = f"{master_seed}:{k}:{density:.9f}:{trial}:detect:{algorithm}".encode()
    return int.from_bytes(hashlib.sha256(tag).digest()[:8], "big") >> 1


def mean_stderr(values):
    """(mean, standard error) with the stderr of a singleton defined as 0."""
    arr = np.asarray(list(values), dtype=float)
    if arr.size == 0:
        return float("nan"), float("nan")
    if arr.size == 1:
        return float(arr[0]), 0.0
    return float(arr.mean()), float(arr.std(ddof=1) / np.sqrt(arr.size))


# ---------------------------------------------------------------------------
# detection sweep
# ---------------------------------------------------------------------------

def _builtin_detector(config, algorithm):
    def run(graph, seed, plan):
        starts = InitPlan(heuristic=True, n_random=config.n_random_starts, seed=seed)
        if config.representation == "uni":
            if algorithm == "oqc_local" and config.uni_oqc_local_heuristic_only:
                starts = InitPlan(heuristic=True, n_random=0, seed=seed)
            result = detect_on_uni(graph, algorithm, config.alpha, config.tail, starts)
        else:
            result = detect_on_bi(graph, algorithm, config.alpha, config.tail, starts,
                                  config.edge_choice)
        return result.subset

    return run


def _base_graph(dataset, config):
    return build_uni(dataset) if config.representation == "uni" else build_bi(dataset)


def _detection_trial(dataset, base_graph, config, detectors, k, density, trial):
    seed = trial_seed(config.master_seed, k, density, trial)
    started = time.perf_counter()
    authors = dataset.author_reviewers()
    if config.representation == "uni":
        graph, plan = inject_uni(base_graph, authors, k, density, seed)
    else:
        graph, plan = inject_bi(base_graph, authors, k, density, seed)
    scores = {}
    for name, detector in detectors.items():
        found = detector(graph, detector_seed(config.master_seed, k, density, trial, name),
                         plan)
        scores[name] = jaccard(found, plan.colluders)
    return TrialRecord(k, density, trial, seed, jaccard=scores,
                       elapsed=time.perf_counter() - started,
                       plan=plan.to_json_dict())


def _success_trial(dataset, base_graph, config, k, density, trial):
    seed = trial_seed(config.master_seed, k, density, trial)
    started = time.perf_counter()
    authors = dataset.author_reviewers()
    try:
        if config.representation == "uni":
            target, plan = inject_uni(base_graph, authors, k, density, seed)
            realized = realize_bids_uni(dataset, target, plan, seed)
        else:
            graph, plan = inject_bi(base_graph, authors, k, density, seed)
            realized = apply_bi_plan(dataset, graph)
        assignment = solve_assignment(similarity(realized), realized.conflict,
                                      config.paper_load, config.reviewer_cap)
        paper_frac, colluder_frac = success_metrics(assignment, plan, realized)
    except InfeasibleAssignmentError as err:
        return TrialRecord(k, density, trial, seed, plan=plan.to_json_dict(),
                           elapsed=time.perf_counter() - started,
                           error=f"infeasible assignment: {err}")
    return TrialRecord(k, density, trial, seed, paper_frac=paper_frac,
                       colluder_frac=colluder_frac,
                       elapsed=time.perf_counter() - started,
                       plan=plan.to_json_dict())


_WORKER_STATE = {}


def _init_worker(dataset, config, kind):
    _WORKER_STATE["dataset"] = dataset
    _WORKER_STATE["config"] = config
    _WORKER_STATE["kind"] = kind
    _WORKER_STATE["base_graph"] = _base_graph(dataset, config)
    if kind == "detect":
        _WORKER_STATE["detectors"] = {
            name: _builtin_detector(config, name) for name in config.algorithms}


def _pool_trial(task):
    k, density, trial = task
    dataset, config = _WORKER_STATE["dataset"], _WORKER_STATE["config"]
    base = _WORKER_STATE["base_graph"]
    if _WORKER_STATE["kind"] == "detect":
        return _detection_trial(dataset, base, config, _WORKER_STATE["detectors"],
                                k, density, trial)
    return _success_trial(dataset, base, config, k, density, trial)


def _run_trials(dataset, config, kind, detectors=None):
    tasks = [(k, density, trial)
             for k in config.k_grid for density in config.density_grid
             for trial in range(config.trials)]
    if config.workers > 1 and detectors is None:
        with ProcessPoolExecutor(max_workers=config.workers, initializer=_init_worker,
                                 initargs=(dataset, config, kind)) as pool:
            records = list(pool.map(_pool_trial, tasks, chunksize=4))
    else:
        base = _base_graph(dataset, config)
        if kind == "detect":
            if detectors is None:
                detectors = {name: _builtin_detector(config, name)
                             for name in config.algorithms}
            records = [_detection_trial(dataset, base, config, detectors, *task)
                       for task in tasks]
        else:
            records = [_success_trial(dataset, base, config, *task) for task in tasks]
    return sorted(records, key=lambda r: (r.k, r.density, r.trial))


def sweep_detection(config, dataset, detectors=None):
    """Run the injection + detection grid; returns long-form rows.

    `detectors` overrides the built-in algorithms with callables
    `(graph, seed, plan) -> reviewer set` (runs serially); by default
    `config.algorithms` resolve to the built-in detectors.

    Rows are dicts with keys k, density, algorithm, metric, mean,
    stderr, n.
    """
    if detectors is None and not config.algorithms:
        raise ConfigError("no detection algorithms configured")
    records = _run_trials(dataset, config, "detect", detectors)
    names = sorted(records[0].jaccard) if records else []
    rows = []
    for k in config.k_grid:
        for density in config.density_grid:
            cell = [r for r in records if r.k == k and r.density == density]
            for name in names:
                mean, stderr = mean_stderr([r.jaccard[name] for r in cell])
                rows.append({"k": k, "density": density, "algorithm": name,
                             "metric": "jaccard", "mean": mean, "stderr": stderr,
                             "n": len(cell)})
    return rows, records


def sweep_success(config, dataset):
    """Run the injection + realization + assignment grid.

    Failed (infeasible) trials are recorded but excluded from the
    aggregates; `n` counts the successful trials per cell.
    """
    if dataset.text_sim is None:
        raise ConfigError("success sweep needs text similarities")
    records = _run_trials(dataset, config, "success")
    rows = []
    for k in config.k_grid:
        for density in config.density_grid:
            cell = [r for r in records if r.k == k and r.density == density]
            good = [r for r in cell if r.error is None]
            for metric in ("paper_frac", "colluder_frac"):
                mean, stderr = mean_stderr([getattr(r, metric) for r in good])
                rows.append({"k": k, "density": density, "algorithm": "assignment",
                             "metric": metric, "mean": mean, "stderr": stderr,
                             "n": len(good)})
    return rows, records


def census_grid(config, dataset):
    """Exact-count census over the configured grid; returns CensusCells."""
    authors = dataset.author_reviewers()
    cells = []
    if config.representation == "uni":
        graph = build_uni(dataset)
        for k in config.k_grid:
            for threshold in config.density_grid:
                cells.append(count_uni_groups(graph, authors, k, threshold,
                                              config.time_budget))
    else:
        graph = build_bi(dataset)
        for k in config.k_grid:
            for threshold in config.density_grid:
                cells.append(count_bi_groups(graph, authors, k, threshold,
                                             config.time_budget))
    return cells


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def save_long_csv(rows, path):
    """Long-form sweep table: k,density,algorithm,metric,mean,stderr,n."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "density", "algorithm", "metric", "mean", "stderr", "n"])
        for row in rows:
            writer.writerow([row["k"], format(row["density"], "g"), row["algorithm"],
                             row["metric"], format(row["mean"], ".17g"),
                             format(row["stderr"], ".17g"), row["n"]])


def save_wide_csv(rows, metric, path, algorithm=None):
    """One heatmap matrix (k rows x density columns) for one metric."""
    picked = [r for r in rows if r["metric"] == metric
              and (algorithm is None or r["algorithm"] == algorithm)]
    if not picked:
        raise ConfigError(f"no rows for metric {metric!r}")
    ks = sorted({r["k"] for r in picked})
    densities = sorted({r["density"] for r in picked})
    value = {(r["k"], r["density"]): r["mean"] for r in picked}
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k"] + [format(d, "g") for d in densities])
        for k in ks:
            writer.writerow([k] + [format(value[(k, d)], ".17g") for d in densities])


def save_trial_records(records, path):
    """JSONL dump of per-trial records, plans included, for replay."""
    with open(path, "w") as fh:
        for record in records:
            fh.write(json.dumps(record.to_json_dict()) + "\n")
