"""End-to-end experiment: data, search, teacher, student, report.

Reproduces the headline workflow at full scale with one command:

    python3 scripts/run_pipeline.py --outdir runs/full

Generates the synthetic severity corpus, splits it 80/10/10, searches
the architecture grid under the size budget, trains the wide teacher,
distills it into the narrow student, and writes evaluation reports plus
a results CSV into the output directory. Every artifact is a pure
function of --seed.
"""

import argparse
import json
import time
from pathlib import Path

import numpy as np

from swarmkd.config_space import config_to_dict, default_space
from swarmkd.cost_model import BYTES_PER_PARAM, MB_BYTES
from swarmkd.data import gen_synthetic, save_csv, stratified_split
from swarmkd.distill import (
    DistillParams,
    MlpClassifier,
    distill_train,
    save_model,
    train_supervised,
)
from swarmkd.metrics import eval_report
from swarmkd.pso import PsoParams, default_fitness_spec, pso_search


def parse_args():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outdir", default="runs/pipeline")
    parser.add_argument("--n", type=int, default=12_071)
    parser.add_argument("--feature-dim", type=int, default=16)
    parser.add_argument("--separation", type=float, default=1.5)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--budget-mb", type=float, default=50.0)
    parser.add_argument("--swarm", type=int, default=200)
    parser.add_argument("--iters", type=int, default=150)
    parser.add_argument("--skip-search", action="store_true")
    parser.add_argument("--teacher-arch", default="16,64,64,4")
    parser.add_argument("--teacher-epochs", type=int, default=40)
    parser.add_argument("--teacher-lr", type=float, default=0.1)
    parser.add_argument("--student-arch", default="16,4,4")
    parser.add_argument("--temperature", type=float, default=10.0)
    parser.add_argument("--alpha", type=float, default=0.0)
    parser.add_argument("--student-lr", type=float, default=5e-4)
    parser.add_argument("--student-epochs", type=int, default=30)
    parser.add_argument("--batch-size", type=int, default=32)
    return parser.parse_args()


def arch(text):
    return [int(s) for s in text.split(",")]


def size_mb(model):
    return model.param_count * BYTES_PER_PARAM / MB_BYTES


def main():
    args = parse_args()
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    print(f"generating n={args.n} (seed {args.seed})")
    data = gen_synthetic(args.n, feature_dim=args.feature_dim,
                         separation=args.separation, seed=args.seed)
    train, val, test = stratified_split(data, (0.8, 0.1, 0.1), seed=args.seed)
    for part, name in ((data, "data"), (train, "train"), (val, "val"), (test, "test")):
        save_csv(part, outdir / f"{name}.csv")
    print(f"split {train.n}/{val.n}/{test.n}")

    if not args.skip_search:
        spec = default_fitness_spec(args.budget_mb)
        params = PsoParams(swarm_size=args.swarm, max_iter=args.iters,
                           seed=args.seed)
        trace = pso_search(default_space(), params, spec)
        with open(outdir / "search_best.json", "w") as fh:
            json.dump(config_to_dict(trace.best_config), fh, indent=2,
                      sort_keys=True)
            fh.write("\n")
        print(f"search best fitness {trace.best_fitness:.4f} "
              f"({trace.evaluations} evaluations, {trace.wall_time:.2f}s)")

    t0 = time.perf_counter()
    teacher = MlpClassifier(arch(args.teacher_arch), seed=args.seed)
    train_supervised(teacher, train, epochs=args.teacher_epochs,
                     learning_rate=args.teacher_lr,
                     batch_size=args.batch_size, seed=args.seed)
    teacher_time = time.perf_counter() - t0
    save_model(teacher, outdir / "teacher.json")

    t0 = time.perf_counter()
    student = MlpClassifier(arch(args.student_arch), seed=args.seed)
    params = DistillParams(temperature=args.temperature, alpha=args.alpha,
                           learning_rate=args.student_lr,
                           epochs=args.student_epochs,
                           batch_size=args.batch_size, seed=args.seed)
    distill_train(teacher, student, train, params)
    student_time = time.perf_counter() - t0
    save_model(student, outdir / "student.json")

    t_report = eval_report("teacher", teacher.predict(test.features),
                           test.labels, size_mb(teacher),
                           time_cost_s=round(teacher_time, 3))
    s_report = eval_report("student", student.predict(test.features),
                           test.labels, size_mb(student), baseline=t_report,
                           time_cost_s=round(student_time, 3))

    with open(outdir / "results.csv", "w") as fh:
        fh.write("model,size_mb,accuracy,mcc,time_s,acc_drop_pct,mcc_drop_pct\n")
        for r in (t_report, s_report):
            fh.write(",".join([
                r.model,
                repr(r.model_size_mb),
                repr(r.accuracy),
                repr(r.mcc),
                repr(r.time_cost_s),
                "" if r.acc_drop_pct is None else repr(r.acc_drop_pct),
                "" if r.mcc_drop_pct is None else repr(r.mcc_drop_pct),
            ]) + "\n")

    for r in (t_report, s_report):
        drop = "" if r.acc_drop_pct is None else f" acc_drop {r.acc_drop_pct:+.2f}%"
        print(f"{r.model}: acc {r.accuracy:.4f} mcc {r.mcc:.4f} "
              f"size {r.model_size_mb:.4f} MB{drop}")
    retention = s_report.accuracy / t_report.accuracy
    print(f"accuracy retention {retention:.4f}, artifacts in {outdir}/")


if __name__ == "__main__":
    main()
