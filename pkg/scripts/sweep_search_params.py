"""Sweep swarm search settings over the full architecture grid.

Crosses swarm size, inertia weight, and size budget, runs each cell
over several seeds, and appends one CSV row per run:

    python3 scripts/sweep_search_params.py --out runs/search_sweep.csv

Best fitness tells whether a cell converges to the same optimum the
big default configuration finds; wall_time and evaluations show what
that costs. The baseline search can be swept alongside with
--algorithms pso,ga for a like-for-like comparison.
"""

import argparse
import csv
from pathlib import Path

from swarmkd.config_space import config_to_dict, default_space
from swarmkd.ga import GaParams, ga_search
from swarmkd.pso import PsoParams, default_fitness_spec, pso_search


def parse_args():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="runs/search_sweep.csv")
    parser.add_argument("--algorithms", default="pso",
                        help="comma list from {pso,ga}")
    parser.add_argument("--swarms", default="20,50,100,200",
                        help="comma list of swarm/population sizes")
    parser.add_argument("--inertias", default="0.4,0.7,0.9",
                        help="comma list of inertia weights (pso only)")
    parser.add_argument("--budgets-mb", default="50",
                        help="comma list of size budgets in MB")
    parser.add_argument("--iters", type=int, default=100)
    parser.add_argument("--seeds", type=int, default=3)
    return parser.parse_args()


def floats(text):
    return [float(s) for s in text.split(",")]


def ints(text):
    return [int(s) for s in text.split(",")]


FIELDS = [
    "algorithm", "swarm_size", "inertia_w", "budget_mb", "iters", "seed",
    "best_fitness", "evaluations", "wall_time_s", "num_hidden_layers",
    "hidden_size", "intermediate_size", "num_attention_heads", "vocab_size",
]


def run_cell(algorithm, swarm, inertia, budget, iters, seed, space):
    spec = default_fitness_spec(budget)
    if algorithm == "pso":
        params = PsoParams(swarm_size=swarm, max_iter=iters,
                           inertia_w=inertia, seed=seed)
        trace = pso_search(space, params, spec)
    else:
        params = GaParams(population=swarm, generations=iters, seed=seed)
        trace = ga_search(space, params, spec)
    cfg = config_to_dict(trace.best_config)
    return {
        "algorithm": algorithm,
        "swarm_size": swarm,
        "inertia_w": inertia if algorithm == "pso" else "",
        "budget_mb": budget,
        "iters": iters,
        "seed": seed,
        "best_fitness": repr(trace.best_fitness),
        "evaluations": trace.evaluations,
        "wall_time_s": round(trace.wall_time, 4),
        "num_hidden_layers": cfg["num_hidden_layers"],
        "hidden_size": cfg["hidden_size"],
        "intermediate_size": cfg["intermediate_size"],
        "num_attention_heads": cfg["num_attention_heads"],
        "vocab_size": cfg["vocab_size"],
    }


def main():
    args = parse_args()
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    algorithms = [a.strip() for a in args.algorithms.split(",")]
    for a in algorithms:
        if a not in ("pso", "ga"):
            raise SystemExit(f"unknown algorithm {a!r}")

    space = default_space()
    rows = []
    for algorithm in algorithms:
        # GA has no inertia knob; collapse that axis so cells stay comparable.
        inertias = floats(args.inertias) if algorithm == "pso" else [0.0]
        for budget in floats(args.budgets_mb):
            for swarm in ints(args.swarms):
                for inertia in inertias:
                    for seed in range(args.seeds):
                        row = run_cell(algorithm, swarm, inertia, budget,
                                       args.iters, seed, space)
                        rows.append(row)
                        print(f"{algorithm} swarm={swarm} w={inertia} "
                              f"budget={budget} seed={seed}: "
                              f"fitness={float(row['best_fitness']):.4f} "
                              f"({row['wall_time_s']}s)")

    with open(out, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=FIELDS)
        writer.writeheader()
        writer.writerows(rows)
    print(f"wrote {len(rows)} rows to {out}")


if __name__ == "__main__":
    main()
