"""Command-line front end.

Subcommands: estimate, search, compare-search, gen-data, train-teacher,
distill, evaluate. Every run takes a single --seed and is deterministic
given it; every file written gets a ``<name>.manifest.json`` sidecar
recording the subcommand, flags, seed, tool version, and timestamps.
Timestamps live only in sidecars so the artifact files themselves stay
byte-reproducible.

Exit codes: 0 success, 1 usage error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .config_space import (
    config_to_dict,
    default_space,
    load_config,
    save_config,
    teacher_config,
)
from .cost_model import BYTES_PER_PARAM, MB_BYTES, compression_ratio, estimate, teacher_estimate
from .data import DEFAULT_CLASS_PROBS, gen_synthetic, load_csv, save_csv, stratified_split
from .distill import (
    DistillParams,
    MlpClassifier,
    distill_train,
    load_model,
    save_model,
    train_supervised,
)
from .ga import GaParams, ga_search
from .metrics import EvalReport, eval_report
from .pso import PsoParams, default_fitness_spec, paired_timing, pso_search


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); we map usage to 1
        raise UsageError(message)


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _dump_json(payload, path: Path) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _print_json(payload) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def _write_manifest(artifact: Path, subcommand: str, ns, started: str, finished: str) -> None:
    flags = {}
    for key, value in sorted(vars(ns).items()):
        if key == "func":
            continue
        flags[key] = value if isinstance(value, (int, float, str, bool, type(None))) else str(value)
    manifest = {
        "subcommand": subcommand,
        "flags": flags,
        "seed": getattr(ns, "seed", None),
        "tool_version": __version__,
        "started_at": started,
        "finished_at": finished,
    }
    _dump_json(manifest, Path(str(artifact) + ".manifest.json"))


def _parse_arch(text: str) -> list[int]:
    try:
        sizes = [int(part) for part in text.split(",")]
    except ValueError:
        raise ValueError(f"bad architecture {text!r}, expected comma-separated sizes") from None
    if len(sizes) < 2:
        raise ValueError(f"architecture {text!r} needs at least input and output sizes")
    return sizes


def _parse_probs(text: str) -> tuple[float, ...]:
    parts = [float(p) for p in text.split(",")]
    if len(parts) != 4:
        raise ValueError("need exactly 4 class probabilities")
    return tuple(parts)


def _cmd_estimate(ns) -> list[Path]:
    cfg = teacher_config() if ns.teacher else load_config(ns.config)
    est = estimate(cfg, ns.seq_len)
    payload = {
        "param_count": est.param_count,
        "size_mb": est.size_mb,
        "size_gb": est.size_gb,
        "gflops": est.gflops,
        "rho_vs_teacher": compression_ratio(est, teacher_estimate(ns.seq_len)),
    }
    _print_json(payload)
    written = []
    if ns.out:
        _dump_json(payload, Path(ns.out))
        written.append(Path(ns.out))
    return written


def _cmd_search(ns) -> list[Path]:
    space = default_space()
    spec = default_fitness_spec(ns.budget_mb, ns.seq_len)
    if ns.algo == "pso":
        params = PsoParams(swarm_size=ns.swarm, max_iter=ns.iters, inertia_w=ns.w,
                           c1=ns.c1, c2=ns.c2, seed=ns.seed)
        trace = pso_search(space, params, spec)
    else:
        params = GaParams(population=ns.swarm, generations=ns.iters, seed=ns.seed)
        trace = ga_search(space, params, spec)

    written = []
    if ns.out:
        path = Path(ns.out)
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["iter", "g_best_fitness"])
            for it, value in enumerate(trace.g_best_fitness):
                writer.writerow([it, repr(float(value))])
        written.append(path)
    if ns.best_config:
        save_config(trace.best_config, ns.best_config)
        written.append(Path(ns.best_config))
    _print_json({
        "algo": ns.algo,
        "best_fitness": trace.best_fitness,
        "evaluations": trace.evaluations,
        "iterations": len(trace.g_best_fitness) - 1,
        "wall_time_s": trace.wall_time,
    })
    return written


def _cmd_compare_search(ns) -> list[Path]:
    space = default_space()
    spec = default_fitness_spec(ns.budget_mb, ns.seq_len)
    pso_params = PsoParams(swarm_size=ns.swarm, max_iter=ns.iters, seed=ns.seed)
    ga_params = GaParams(population=ns.swarm, generations=ns.iters, seed=ns.seed)
    pso_times, ga_times = paired_timing(
        pso_search, pso_params, ga_search, ga_params, space, spec, ns.runs)
    pso_mean = float(np.mean(pso_times))
    ga_mean = float(np.mean(ga_times))
    payload = {
        "runs": ns.runs,
        "pso_mean_s": pso_mean,
        "pso_std_s": float(np.std(pso_times)),
        "ga_mean_s": ga_mean,
        "ga_std_s": float(np.std(ga_times)),
        "time_reduction_pct": (ga_mean - pso_mean) / ga_mean * 100.0,
    }
    _print_json(payload)
    written = []
    if ns.out:
        _dump_json(payload, Path(ns.out))
        written.append(Path(ns.out))
    return written


def _cmd_gen_data(ns) -> list[Path]:
    probs = _parse_probs(ns.probs) if ns.probs else DEFAULT_CLASS_PROBS
    data = gen_synthetic(ns.n, probs, ns.feature_dim, ns.separation, ns.seed)
    out = Path(ns.out)
    save_csv(data, out)
    written = [out]
    if ns.split:
        train, val, test = stratified_split(data, seed=ns.seed)
        for part, name in ((train, "train"), (val, "val"), (test, "test")):
            path = out.with_name(f"{out.stem}_{name}{out.suffix}")
            save_csv(part, path)
            written.append(path)
    _print_json({"n": data.n, "class_counts": data.class_counts().tolist()})
    return written


def _cmd_train_teacher(ns) -> list[Path]:
    data = load_csv(ns.data)
    sizes = _parse_arch(ns.arch)
    if sizes[0] != data.feature_dim:
        raise ValueError(f"architecture input {sizes[0]} != feature dim {data.feature_dim}")
    model = MlpClassifier(sizes, ns.activation, seed=ns.seed)
    model, curve = train_supervised(model, data, ns.epochs, ns.lr, ns.batch_size, ns.seed)
    save_model(model, ns.out)
    summary = {
        "train_accuracy": float((model.predict(data.features) == data.labels).mean()),
        "final_loss": curve[-1] if curve else None,
        "param_count": model.param_count,
    }
    if ns.val:
        val = load_csv(ns.val)
        summary["val_accuracy"] = float((model.predict(val.features) == val.labels).mean())
    _print_json(summary)
    return [Path(ns.out)]


def _cmd_distill(ns) -> list[Path]:
    data = load_csv(ns.data)
    teacher = load_model(ns.teacher)
    sizes = _parse_arch(ns.student_arch)
    if sizes[0] != data.feature_dim:
        raise ValueError(f"architecture input {sizes[0]} != feature dim {data.feature_dim}")
    params = DistillParams(
        temperature=ns.temperature,
        alpha=ns.alpha,
        learning_rate=ns.lr,
        epochs=ns.epochs,
        batch_size=ns.batch_size,
        seed=ns.seed,
    )
    student = MlpClassifier(sizes, ns.activation, seed=ns.seed)
    student, curve = distill_train(teacher, student, data, params)
    save_model(student, ns.out)
    written = [Path(ns.out)]
    if ns.curve:
        path = Path(ns.curve)
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["epoch", "loss"])
            for epoch, value in enumerate(curve, start=1):
                writer.writerow([epoch, repr(float(value))])
        written.append(path)
    _print_json({
        "epochs": len(curve),
        "final_loss": curve[-1] if curve else None,
        "student_params": student.param_count,
        "teacher_params": teacher.param_count,
    })
    return written


def _cmd_evaluate(ns) -> list[Path]:
    data = load_csv(ns.data)
    model = load_model(ns.model)
    pred = model.predict(data.features)
    baseline = None
    if ns.baseline:
        with open(ns.baseline) as fh:
            baseline = EvalReport(**json.load(fh))
    report = eval_report(
        model_name=ns.model_name or Path(ns.model).stem,
        pred=pred,
        truth=data.labels,
        model_size_mb=model.param_count * BYTES_PER_PARAM / MB_BYTES,
        baseline=baseline,
        time_cost_s=ns.time_cost_s,
    )
    _print_json(report.to_dict())
    written = []
    if ns.out:
        _dump_json(report.to_dict(), Path(ns.out))
        written.append(Path(ns.out))
    if ns.results:
        path = Path(ns.results)
        columns = ["model", "size_mb", "accuracy", "mcc", "time_s",
                   "acc_drop_pct", "mcc_drop_pct"]
        fresh = not path.exists()
        with open(path, "a", newline="") as fh:
            writer = csv.writer(fh)
            if fresh:
                writer.writerow(columns)
            writer.writerow([
                report.model,
                repr(report.model_size_mb),
                repr(report.accuracy),
                repr(report.mcc),
                "" if report.time_cost_s is None else repr(report.time_cost_s),
                "" if report.acc_drop_pct is None else repr(report.acc_drop_pct),
                "" if report.mcc_drop_pct is None else repr(report.mcc_drop_pct),
            ])
        written.append(path)
    return written


def build_parser() -> _Parser:
    parser = _Parser(prog="swarmkd", description=__doc__)
    parser.add_argument("--version", action="version", version=f"swarmkd {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("estimate", help="parameter count, size, and GFLOPs of one config")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--config", help="architecture config JSON")
    group.add_argument("--teacher", action="store_true", help="use the reference encoder")
    p.add_argument("--seq-len", type=int, default=512)
    p.add_argument("--out", help="also write the JSON payload here")
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("search", help="search the architecture grid under a size budget")
    p.add_argument("--budget-mb", type=float, required=True)
    p.add_argument("--swarm", type=int, default=200, help="swarm size / GA population")
    p.add_argument("--iters", type=int, default=150, help="iterations / generations")
    p.add_argument("--w", type=float, default=0.9, help="inertia weight (pso)")
    p.add_argument("--c1", type=float, default=2.0)
    p.add_argument("--c2", type=float, default=2.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--algo", choices=("pso", "ga"), default="pso")
    p.add_argument("--seq-len", type=int, default=512)
    p.add_argument("--out", help="trace CSV (iter, g_best_fitness)")
    p.add_argument("--best-config", help="best architecture JSON")
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("compare-search", help="paired swarm-vs-GA timing at equal budgets")
    p.add_argument("--budget-mb", type=float, required=True)
    p.add_argument("--runs", type=int, default=5)
    p.add_argument("--swarm", type=int, default=200)
    p.add_argument("--iters", type=int, default=150)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--seq-len", type=int, default=512)
    p.add_argument("--out", help="write the timing JSON here")
    p.set_defaults(func=_cmd_compare_search)

    p = sub.add_parser("gen-data", help="generate the synthetic severity dataset")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--probs", help="four class probabilities, comma separated")
    p.add_argument("--feature-dim", type=int, default=16)
    p.add_argument("--separation", type=float, default=1.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="dataset CSV")
    p.add_argument("--split", action="store_true",
                   help="also write 80/10/10 stratified train/val/test CSVs")
    p.set_defaults(func=_cmd_gen_data)

    p = sub.add_parser("train-teacher", help="supervised training of the reference classifier")
    p.add_argument("--data", required=True, help="training CSV")
    p.add_argument("--arch", default="16,64,64,4")
    p.add_argument("--activation", default="gelu")
    p.add_argument("--epochs", type=int, default=50)
    p.add_argument("--lr", type=float, default=0.1)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--val", help="validation CSV for a held-out accuracy")
    p.add_argument("--out", required=True, help="model JSON")
    p.set_defaults(func=_cmd_train_teacher)

    p = sub.add_parser("distill", help="distill a frozen teacher into a smaller student")
    p.add_argument("--teacher", required=True, help="teacher model JSON")
    p.add_argument("--student-arch", required=True, help="e.g. 16,16,4")
    p.add_argument("--activation", default="gelu")
    p.add_argument("--data", required=True, help="training CSV (labels used only if alpha > 0)")
    p.add_argument("--temperature", type=float, default=10.0)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--lr", type=float, default=5e-4)
    p.add_argument("--epochs", type=int, default=30)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="student model JSON")
    p.add_argument("--curve", help="loss-curve CSV (epoch, loss)")
    p.set_defaults(func=_cmd_distill)

    p = sub.add_parser("evaluate", help="accuracy/MCC report for a trained model")
    p.add_argument("--model", required=True, help="model JSON")
    p.add_argument("--data", required=True, help="evaluation CSV")
    p.add_argument("--model-name", help="name for the report (default: model file stem)")
    p.add_argument("--baseline", help="teacher EvalReport JSON for drop percentages")
    p.add_argument("--time-cost-s", type=float, help="recorded time figure for the report")
    p.add_argument("--out", help="write the report JSON here")
    p.add_argument("--results", help="append one row to this results CSV")
    p.set_defaults(func=_cmd_evaluate)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help / --version
        return 0 if exc.code in (0, None) else 1
    started = _now()
    try:
        written = ns.func(ns)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    finished = _now()
    for path in written:
        _write_manifest(path, ns.subcommand, ns, started, finished)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
