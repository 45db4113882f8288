"""Grid-sweep distillation temperature and soft/hard mixing weight.

Trains one teacher on the synthetic severity corpus, then distills a
fresh student per (temperature, alpha) cell and scores both on the
held-out test split:

    python3 scripts/sweep_distill_params.py --out runs/distill_sweep.csv

alpha weights the hard-label loss: 0 is pure teacher matching, 1
ignores the teacher entirely and reduces to supervised training. One
CSV row per cell records accuracy, correlation score, and the drop of
each relative to the teacher.
"""

import argparse
import csv
from pathlib import Path

from swarmkd.cost_model import BYTES_PER_PARAM, MB_BYTES
from swarmkd.data import gen_synthetic, stratified_split
from swarmkd.distill import (
    DistillParams,
    MlpClassifier,
    distill_train,
    train_supervised,
)
from swarmkd.metrics import eval_report


def parse_args():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="runs/distill_sweep.csv")
    parser.add_argument("--n", type=int, default=12_071)
    parser.add_argument("--separation", type=float, default=1.5)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--temperatures", default="1,2,5,10,20")
    parser.add_argument("--alphas", default="0,0.25,0.5,0.75,1")
    parser.add_argument("--teacher-arch", default="16,64,64,4")
    parser.add_argument("--teacher-epochs", type=int, default=40)
    parser.add_argument("--teacher-lr", type=float, default=0.1)
    parser.add_argument("--student-arch", default="16,4,4")
    parser.add_argument("--student-lr", type=float, default=5e-4)
    parser.add_argument("--student-epochs", type=int, default=30)
    return parser.parse_args()


def arch(text):
    return [int(s) for s in text.split(",")]


def size_mb(model):
    return model.param_count * BYTES_PER_PARAM / MB_BYTES


FIELDS = [
    "temperature", "alpha", "student_accuracy", "student_mcc",
    "acc_drop_pct", "mcc_drop_pct", "teacher_accuracy", "teacher_mcc",
]


def main():
    args = parse_args()
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)

    data = gen_synthetic(args.n, separation=args.separation, seed=args.seed)
    train, _, test = stratified_split(data, (0.8, 0.1, 0.1), seed=args.seed)

    teacher = MlpClassifier(arch(args.teacher_arch), seed=args.seed)
    train_supervised(teacher, train, epochs=args.teacher_epochs,
                     learning_rate=args.teacher_lr, seed=args.seed)
    t_report = eval_report("teacher", teacher.predict(test.features),
                           test.labels, size_mb(teacher))
    print(f"teacher: acc {t_report.accuracy:.4f} mcc {t_report.mcc:.4f}")

    rows = []
    for temperature in [float(s) for s in args.temperatures.split(",")]:
        for alpha in [float(s) for s in args.alphas.split(",")]:
            student = MlpClassifier(arch(args.student_arch), seed=args.seed)
            params = DistillParams(temperature=temperature, alpha=alpha,
                                   learning_rate=args.student_lr,
                                   epochs=args.student_epochs,
                                   seed=args.seed)
            distill_train(teacher, student, train, params)
            s_report = eval_report("student", student.predict(test.features),
                                   test.labels, size_mb(student),
                                   baseline=t_report)
            rows.append({
                "temperature": temperature,
                "alpha": alpha,
                "student_accuracy": repr(s_report.accuracy),
                "student_mcc": repr(s_report.mcc),
                "acc_drop_pct": repr(s_report.acc_drop_pct),
                "mcc_drop_pct": repr(s_report.mcc_drop_pct),
                "teacher_accuracy": repr(t_report.accuracy),
                "teacher_mcc": repr(t_report.mcc),
            })
            print(f"T={temperature:<5g} alpha={alpha:<5g} "
                  f"acc {s_report.accuracy:.4f} mcc {s_report.mcc:.4f} "
                  f"acc_drop {s_report.acc_drop_pct:+.2f}%")

    with open(out, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=FIELDS)
        writer.writeheader()
        writer.writerows(rows)
    print(f"wrote {len(rows)} rows to {out}")


if __name__ == "__main__":
    main()
