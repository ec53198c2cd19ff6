"""Command-line harness.

Subcommands: gen, textsim, load-check, census, peel, detect,
sweep-detect, sweep-success, assign.  Exit codes: 0 success, 2
configuration error, 3 data error, 4 infeasible assignment.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from . import dataset as ds_mod
from .assign import similarity, solve_assignment
from .bigraph import build_bi
from .census import peel_bi, peel_uni, save_census_csv
from .dataset import TextSimModel, generate_synthetic_dataset, generate_text_similarities
from .detect import BI_ALGORITHMS, UNI_ALGORITHMS, GPTail, InitPlan, run_detection
from .errors import (
    BidRingError,
    ConfigError,
    DataFormatError,
    DegenerateSubsetError,
    InfeasibleAssignmentError,
    InvariantError,
)
from .harness import (
    PAPER_CENSUS_K_BI,
    PAPER_CENSUS_K_UNI,
    PAPER_GRID_ETA,
    PAPER_GRID_GAMMA,
    PAPER_GRID_K,
    SweepConfig,
    census_grid,
    save_long_csv,
    save_trial_records,
    save_wide_csv,
    sweep_detection,
    sweep_success,
)
from .unigraph import build_uni

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_INFEASIBLE = 4


def _int_list(text):
    return tuple(int(tok) for tok in text.split(",") if tok.strip())


def _float_list(text):
    return tuple(float(tok) for tok in text.split(",") if tok.strip())


def _add_data_options(parser):
    parser.add_argument("--input", required=True, help="dataset file")
    parser.add_argument("--input-format", default="csv-triplets",
                        choices=["csv-triplets", "preflib-categorical", "s2orc-npz"])
    parser.add_argument("--subsample-authors", type=int, metavar="N",
                        help="resample N authorships per paper from its conflicts")


def _load(args):
    if args.input_format == "s2orc-npz":
        dataset, discarded = ds_mod.load_s2orc_npz(args.input)
        if discarded:
            print(f"discarded {discarded} self-authored bids", file=sys.stderr)
    else:
        dataset = ds_mod.load_dataset(args.input, args.input_format)
    if args.subsample_authors is not None:
        dataset = ds_mod.subsample_authorships(dataset, args.subsample_authors, args.seed)
    return dataset


def _sweep_config(args, representation):
    if args.paper_grid:
        k_grid = PAPER_GRID_K
        density_grid = PAPER_GRID_GAMMA if representation == "uni" else PAPER_GRID_ETA
    else:
        if args.k_grid is None or args.density_grid is None:
            raise ConfigError("either --paper-grid or both --k-grid and --density-grid")
        k_grid, density_grid = args.k_grid, args.density_grid
    return SweepConfig(
        representation=representation,
        k_grid=k_grid,
        density_grid=density_grid,
        trials=args.trials,
        algorithms=tuple(args.algorithms) if hasattr(args, "algorithms") else (),
        master_seed=args.seed,
        time_budget=args.time_budget,
        workers=args.workers,
        alpha=args.alpha,
        edge_choice=getattr(args, "edge_choice", "bids"),
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bidring",
        description="Collusion-ring bidding simulation, detection, and assignment.")
    parser.add_argument("--seed", type=int, default=0, help="master random seed")
    parser.add_argument("--workers", type=int, default=1, help="parallel trial workers")
    parser.add_argument("--time-budget", type=float, default=None,
                        help="census seconds per cell (default unlimited)")
    parser.add_argument("--format", default="csv", choices=["csv", "json"],
                        help="output encoding where applicable")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a synthetic dataset")
    p.add_argument("--reviewers", type=int, required=True)
    p.add_argument("--papers", type=int, required=True)
    p.add_argument("--bid-prob", type=float, required=True)
    p.add_argument("--authors-per-paper", type=int, default=1)
    p.add_argument("--yes-frac", type=float, default=0.5)
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("textsim", help="attach synthetic text similarities")
    _add_data_options(p)
    p.add_argument("--base-mean", type=float, default=0.030)
    p.add_argument("--sigma", type=float, default=0.05)
    p.add_argument("--p-easy", type=float, default=0.80)
    p.add_argument("--p-hard", type=float, default=0.62)
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("load-check", help="load a dataset and print shape counts")
    _add_data_options(p)

    p = sub.add_parser("census", help="count dense honest groups on a grid")
    _add_data_options(p)
    p.add_argument("--representation", required=True, choices=["uni", "bi"])
    p.add_argument("--k-grid", type=_int_list)
    p.add_argument("--density-grid", type=_float_list)
    p.add_argument("--paper-grid", action="store_true")
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("peel", help="greedy peeling frontier")
    _add_data_options(p)
    p.add_argument("--representation", required=True, choices=["uni", "bi"])
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("detect", help="run one detection algorithm")
    _add_data_options(p)
    p.add_argument("--representation", required=True, choices=["uni", "bi"])
    p.add_argument("--algorithm", required=True)
    p.add_argument("--alpha", type=float, default=1 / 3)
    p.add_argument("--random-starts", type=int, default=10)
    p.add_argument("--edge-choice", default="bids", choices=["bids", "bids+authorships"])
    p.add_argument("-o", "--output")

    for name in ("sweep-detect", "sweep-success"):
        p = sub.add_parser(name, help=f"{name.replace('-', ' ')} over a (k, density) grid")
        _add_data_options(p)
        p.add_argument("--representation", required=True, choices=["uni", "bi"])
        p.add_argument("--k-grid", type=_int_list)
        p.add_argument("--density-grid", type=_float_list)
        p.add_argument("--paper-grid", action="store_true",
                       help="use the replication grid axes")
        p.add_argument("--trials", type=int, default=50)
        p.add_argument("--alpha", type=float, default=1 / 3)
        p.add_argument("--trial-records", help="optional JSONL per-trial dump")
        p.add_argument("--heatmap", help="optional wide per-metric CSV prefix")
        p.add_argument("-o", "--output", required=True)
        if name == "sweep-detect":
            p.add_argument("--algorithms", type=lambda s: s.split(","), required=True)
            p.add_argument("--edge-choice", default="bids",
                           choices=["bids", "bids+authorships"])

    p = sub.add_parser("assign", help="solve the paper assignment")
    _add_data_options(p)
    p.add_argument("--paper-load", type=int, default=3)
    p.add_argument("--reviewer-cap", type=int, default=6)
    p.add_argument("-o", "--output", required=True)
    return parser


def _cmd_gen(args):
    dataset = generate_synthetic_dataset(args.reviewers, args.papers, args.bid_prob,
                                         args.authors_per_paper, args.seed,
                                         yes_frac=args.yes_frac)
    dataset.save_csv(args.output)
    print(f"wrote {args.output}: {dataset.n_reviewers} reviewers, "
          f"{dataset.n_papers} papers, {int(dataset.bid.sum())} bids")


def _cmd_textsim(args):
    dataset = _load(args)
    model = TextSimModel(args.base_mean, args.sigma, args.p_easy, args.p_hard)
    out = generate_text_similarities(dataset, model, args.seed)
    out.save_csv(args.output)
    print(f"wrote {args.output} with text similarities")


def _cmd_load_check(args):
    dataset = _load(args)
    summary = {
        "reviewers": dataset.n_reviewers,
        "papers": dataset.n_papers,
        "bids": int(dataset.bid.sum()),
        "authorship_pairs": int(dataset.author.sum()),
        "conflict_pairs": int(dataset.conflict.sum()),
        "authors": int(len(dataset.author_reviewers())),
        "has_text_sim": dataset.text_sim is not None,
    }
    if args.format == "json":
        print(json.dumps(summary, indent=1))
    else:
        for key, value in summary.items():
            print(f"{key}: {value}")


def _cmd_census(args):
    dataset = _load(args)
    if args.paper_grid:
        k_grid = PAPER_CENSUS_K_UNI if args.representation == "uni" else PAPER_CENSUS_K_BI
        density_grid = PAPER_GRID_GAMMA if args.representation == "uni" else PAPER_GRID_ETA
    elif args.k_grid is None or args.density_grid is None:
        raise ConfigError("either --paper-grid or both --k-grid and --density-grid")
    else:
        k_grid, density_grid = args.k_grid, args.density_grid
    config = SweepConfig(args.representation, k_grid, density_grid,
                         master_seed=args.seed, time_budget=args.time_budget)
    cells = census_grid(config, dataset)
    save_census_csv(cells, args.output)
    print(f"wrote {args.output}: {len(cells)} cells "
          f"({sum(1 for c in cells if not c.exact)} lower bounds)")


def _cmd_peel(args):
    dataset = _load(args)
    authors = dataset.author_reviewers()
    if args.representation == "uni":
        frontier = peel_uni(build_uni(dataset), authors)
    else:
        frontier = peel_bi(build_bi(dataset), authors)
    with open(args.output, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["size", "density", "degenerate"])
        for size, density, bad in zip(frontier.sizes, frontier.densities,
                                      frontier.degenerate):
            writer.writerow([size, format(density, ".17g"), "true" if bad else "false"])
    print(f"wrote {args.output}: {len(frontier.sizes)} frontier points")


def _cmd_detect(args):
    dataset = _load(args)
    algorithms = UNI_ALGORITHMS if args.representation == "uni" else BI_ALGORITHMS
    if args.algorithm not in algorithms:
        raise ConfigError(f"({args.algorithm}, {args.representation}) "
                          "is not a supported combination")
    starts = InitPlan(heuristic=True, n_random=args.random_starts, seed=args.seed)
    result = run_detection(dataset, args.algorithm, args.representation,
                           alpha=args.alpha, tail=GPTail(), starts=starts,
                           edge_choice=args.edge_choice)
    record = result.to_json_dict(args.representation, args.seed, dataset.reviewers)
    if args.output:
        with open(args.output, "w") as fh:
            json.dump([record], fh, indent=1)
        print(f"wrote {args.output}")
    print(json.dumps(record) if args.format == "json" else
          f"{result.algorithm}: {len(result.subset)} reviewers, "
          f"objective {result.objective:.6g}")


def _cmd_sweep_detect(args):
    dataset = _load(args)
    config = _sweep_config(args, args.representation)
    rows, records = sweep_detection(config, dataset)
    save_long_csv(rows, args.output)
    if args.trial_records:
        save_trial_records(records, args.trial_records)
    if args.heatmap:
        for name in config.algorithms:
            save_wide_csv(rows, "jaccard", f"{args.heatmap}.{name}.csv", algorithm=name)
    print(f"wrote {args.output}: {len(rows)} rows")


def _cmd_sweep_success(args):
    dataset = _load(args)
    config = _sweep_config(args, args.representation)
    rows, records = sweep_success(config, dataset)
    save_long_csv(rows, args.output)
    if args.trial_records:
        save_trial_records(records, args.trial_records)
    if args.heatmap:
        for metric in ("paper_frac", "colluder_frac"):
            save_wide_csv(rows, metric, f"{args.heatmap}.{metric}.csv")
    failures = sum(1 for r in records if r.error is not None)
    print(f"wrote {args.output}: {len(rows)} rows, {failures} failed trials")


def _cmd_assign(args):
    dataset = _load(args)
    assignment = solve_assignment(similarity(dataset), dataset.conflict,
                                  args.paper_load, args.reviewer_cap)
    assignment.save_csv(args.output, dataset.reviewers, dataset.papers)
    print(f"wrote {args.output}: objective {assignment.objective:.6g}")


_COMMANDS = {
    "gen": _cmd_gen,
    "textsim": _cmd_textsim,
    "load-check": _cmd_load_check,
    "census": _cmd_census,
    "peel": _cmd_peel,
    "detect": _cmd_detect,
    "sweep-detect": _cmd_sweep_detect,
    "sweep-success": _cmd_sweep_success,
    "assign": _cmd_assign,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _COMMANDS[args.command](args)
    except InfeasibleAssignmentError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (DataFormatError, InvariantError, FileNotFoundError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_DATA
    except (ConfigError, DegenerateSubsetError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except BidRingError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
