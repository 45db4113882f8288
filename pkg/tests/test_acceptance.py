"""End-to-end acceptance checks.

Each test covers one numbered criterion and prints a single PASS/FAIL
line (straight to the real stdout, so the lines survive capture) before
asserting. Run this module alone for a quick scorecard:

    pytest tests/test_acceptance.py -q
"""

from __future__ import annotations

import json
import sys

import numpy as np
import pytest
from sklearn.metrics import matthews_corrcoef

from swarmkd.cli import run as cli_run
from swarmkd.config_space import default_space, teacher_config
from swarmkd.cost_model import compression_ratio, estimate, teacher_estimate
from swarmkd.data import LabeledDataset, gen_synthetic, stratified_split
from swarmkd.distill import (
    DistillParams,
    MlpClassifier,
    distill_train,
    kd_loss_batch,
    soften,
    train_supervised,
)
from swarmkd.ga import GaParams, ga_search
from swarmkd.metrics import drop_pct, mcc
from swarmkd.pso import PsoParams, default_fitness_spec, paired_timing, pso_search

import conftest
from conftest import (
    brute_force_best,
    space_hidden_by_heads,
    space_hidden_by_layers,
    space_vocab_by_intermediate,
)


def _report(criterion: int, label: str, ok: bool, detail: str) -> None:
    status = "PASS" if ok else "FAIL"
    line = f"{status} criterion {criterion:02d} [{label}]: {detail}"
    conftest.ACCEPTANCE_LINES.append(line)
    print(line, file=sys.__stdout__, flush=True)
    assert ok, f"criterion {criterion} failed: {detail}"


def test_c01_reference_model_cost():
    est = teacher_estimate()
    count_ok = abs(est.param_count - 125_000_000) <= 0.05 * 125_000_000
    size_ok = 450.0 <= est.size_mb <= 500.0
    _report(1, "reference cost", count_ok and size_ok,
            f"param_count={est.param_count:,} size_mb={est.size_mb:.2f}")


def test_c02_budget_compression_figures():
    teacher = teacher_estimate()
    size_drop = drop_pct(teacher.size_mb, 3.0)
    rho = 786_432 / teacher.param_count
    drop_ok = 99.3 <= size_drop <= 99.5
    rho_ok = abs(rho - 0.0063) < 1e-4
    _report(2, "3 MB compression", drop_ok and rho_ok,
            f"size_drop={size_drop:.3f}% rho={100 * rho:.3f}%")


def test_c03_search_matches_exhaustive_optimum():
    cases = [
        ("hidden x layers", space_hidden_by_layers(), 3.0),
        ("vocab x intermediate", space_vocab_by_intermediate(), 25.0),
        ("hidden x heads", space_hidden_by_heads(), 50.0),
    ]
    seeds = range(5)
    details = []
    ok = True
    for name, space, budget in cases:
        spec = default_fitness_spec(budget)
        optimum, _, _ = brute_force_best(space, spec)
        for algo, search in (("pso", lambda s: pso_search(
                space, PsoParams(swarm_size=60, max_iter=100, seed=s), spec)),
                             ("ga", lambda s: ga_search(
                space, GaParams(population=60, generations=100, seed=s), spec))):
            values = [search(s).best_fitness for s in seeds]
            exact = sum(1 for v in values if v == optimum)
            worst_gap = max(abs(v - optimum) / abs(optimum) for v in values)
            if exact < 4 or worst_gap > 0.01:
                ok = False
            details.append(f"{name}/{algo} exact {exact}/5 gap {worst_gap:.2e}")
    _report(3, "exhaustive optimum", ok, "; ".join(details))


def test_c04_full_space_convergence_plateau():
    space = default_space()
    spec = default_fitness_spec(budget_mb=50.0)
    ok = True
    finals = []
    for seed in (0, 1, 2):
        trace = pso_search(space, PsoParams(seed=seed), spec)
        values = np.array(trace.g_best_fitness)
        monotone = bool(np.all(np.diff(values) >= 0))
        plateau = abs(values[-1] - values[-21]) < 1e-9
        if not (monotone and plateau and len(values) == 151):
            ok = False
        finals.append(float(values[-1]))
    _report(4, "convergence plateau", ok,
            f"final fitness by seed {[round(f, 4) for f in finals]}, "
            f"last-20-iteration change < 1e-9")


def test_c05_swarm_not_slower_than_baseline():
    space = default_space()
    spec = default_fitness_spec(budget_mb=50.0)
    runs = 5
    pso_times, ga_times = paired_timing(
        pso_search, PsoParams(swarm_size=200, max_iter=150, seed=0),
        ga_search, GaParams(population=200, generations=150, seed=0),
        space, spec, runs=runs)
    pso_mean = float(np.mean(pso_times))
    ga_mean = float(np.mean(ga_times))
    reduction = (ga_mean - pso_mean) / ga_mean * 100.0
    _report(5, "search timing", pso_mean <= ga_mean,
            f"mean over {runs} paired runs: swarm {pso_mean:.3f}s vs "
            f"baseline {ga_mean:.3f}s ({reduction:+.1f}%)")


def test_c06_distillation_math():
    rng = np.random.default_rng(0)
    temperatures = (2.0, 5.0, 7.0, 10.0, 12.0, 15.0, 20.0)

    worst = 0.0
    cases = 0
    for t in temperatures:
        for alpha in (0.0, 0.5, 1.0):
            for _ in range(5):
                zt = rng.uniform(-6, 6, size=(3, 4))
                zs = rng.uniform(-6, 6, size=(3, 4))
                y = rng.integers(0, 4, size=3)
                params = DistillParams(temperature=t, alpha=alpha)
                teacher = None if alpha == 1.0 else zt
                _, analytic = kd_loss_batch(teacher, zs, y, params)
                numeric = np.zeros_like(zs)
                eps = 1e-5
                for idx in np.ndindex(*zs.shape):
                    plus, minus = zs.copy(), zs.copy()
                    plus[idx] += eps
                    minus[idx] -= eps
                    numeric[idx] = (kd_loss_batch(teacher, plus, y, params)[0]
                                    - kd_loss_batch(teacher, minus, y, params)[0]) / (2 * eps)
                scale = max(float(np.max(np.abs(numeric))), 1e-8)
                worst = max(worst, float(np.max(np.abs(analytic - numeric))) / scale)
                cases += 1
    grad_ok = cases >= 100 and worst < 1e-6

    zs = rng.uniform(-5, 5, size=(16, 4))
    y = rng.integers(0, 4, size=16)
    ce_loss, ce_grad = kd_loss_batch(None, zs, y,
                                     DistillParams(temperature=9.0, alpha=1.0))
    shifted = zs - zs.max(axis=1, keepdims=True)
    log_p = shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    plain = float(-log_p[np.arange(16), y].mean())
    ce_ok = ce_loss == plain

    t = 10.0
    z = rng.uniform(-4, 4, size=(8, 4))
    eq_loss, eq_grad = kd_loss_batch(z, z.copy(), None,
                                     DistillParams(temperature=t, alpha=0.0))
    ent = np.mean([-np.sum(p * np.log(p)) for p in (soften(row, t) for row in z)])
    entropy_ok = (abs(eq_loss - t * t * ent) < 1e-9
                  and np.allclose(eq_grad, 0.0, atol=1e-12))

    probs = soften(rng.uniform(-30, 30, size=6), 7.0)
    soften_ok = abs(probs.sum() - 1.0) < 1e-12 and np.all(probs > 0)

    _report(6, "distillation math", grad_ok and ce_ok and entropy_ok and soften_ok,
            f"{cases} gradient cases, worst relative error {worst:.2e}; "
            f"alpha=1 bit-equals cross-entropy; equal-logit loss = T^2 * entropy")


def test_c07_distillation_retains_quality():
    data = gen_synthetic(12_071, seed=0)
    train, _, test = stratified_split(data, (0.8, 0.1, 0.1), seed=0)

    retentions = []
    wins = 0
    for seed in range(5):
        teacher = MlpClassifier([16, 64, 64, 4], seed=seed)
        train_supervised(teacher, train, epochs=40, learning_rate=0.1,
                         batch_size=32, seed=seed)
        t_pred = teacher.predict(test.features)
        t_acc = float(np.mean(t_pred == test.labels))
        t_mcc = mcc(t_pred, test.labels)

        student = MlpClassifier([16, 4, 4], seed=seed)
        params = DistillParams(temperature=10.0, alpha=0.0,
                               learning_rate=5e-4, epochs=30,
                               batch_size=32, seed=seed)
        distill_train(teacher, student, train, params)
        s_pred = student.predict(test.features)
        s_acc = float(np.mean(s_pred == test.labels))
        s_mcc = mcc(s_pred, test.labels)

        retentions.append(s_acc / t_acc)
        if drop_pct(t_mcc, s_mcc) > drop_pct(t_acc, s_acc):
            wins += 1

    median_retention = float(np.median(retentions))
    ok = median_retention >= 0.85 and wins >= 3
    _report(7, "distillation quality", ok,
            f"median accuracy retention {median_retention:.4f} (>= 0.85), "
            f"MCC drop exceeds accuracy drop in {wins}/5 runs (>= 3)")


def test_c08_stratified_split_reference_counts():
    counts = [1462, 5568, 4744, 297]
    n = sum(counts)
    labels = np.concatenate([np.full(c, k, dtype=np.int64)
                             for k, c in enumerate(counts)])
    labels = labels[np.random.default_rng(0).permutation(n)]
    features = np.zeros((n, 2))
    features[:, 0] = np.arange(n)
    data = LabeledDataset(features, labels)

    train, val, test = stratified_split(data, (0.8, 0.1, 0.1), seed=0)
    sizes_ok = (train.n, val.n, test.n) == (9656, 1207, 1208)

    reference = {
        0: (1169, 146, 147),
        1: (4454, 557, 557),
        2: (3795, 474, 475),
        3: (238, 30, 29),
    }
    rows_ok = True
    for k, row in reference.items():
        got = (int(train.class_counts()[k]), int(val.class_counts()[k]),
               int(test.class_counts()[k]))
        if any(abs(g - r) > 1 for g, r in zip(got, row)):
            rows_ok = False

    _report(8, "stratified split", sizes_ok and rows_ok,
            f"sizes {train.n}/{val.n}/{test.n}, every class row within 1 "
            f"of the reference table")


def test_c09_correlation_metric():
    truth = np.array([0, 0, 0, 1, 1, 1])
    pred = np.array([0, 0, 1, 0, 1, 1])
    hand_ok = abs(mcc(pred, truth, n_classes=2) - 1.0 / 3.0) < 1e-12

    rng = np.random.default_rng(1)
    worst = 0.0
    for _ in range(100):
        size = int(rng.integers(8, 300))
        t = rng.integers(0, 4, size=size)
        p = rng.integers(0, 4, size=size)
        worst = max(worst, abs(mcc(p, t) - float(matthews_corrcoef(t, p))))
    sklearn_ok = worst < 1e-12

    degenerate_ok = mcc(np.zeros(10, dtype=int), np.zeros(10, dtype=int)) == 0.0

    _report(9, "correlation metric", hand_ok and sklearn_ok and degenerate_ok,
            f"hand value 1/3 exact, 100 random cases within {worst:.1e} "
            f"of the sklearn oracle, degenerate case 0")


def test_c10_cli_pipeline_reproducible(tmp_path):
    def one_pass(d):
        d.mkdir()
        data = d / "data.csv"
        assert cli_run(["gen-data", "--n", "2000", "--out", str(data),
                        "--split", "--seed", "0"]) == 0
        trace = d / "trace.csv"
        best = d / "best.json"
        assert cli_run(["search", "--budget-mb", "50", "--swarm", "30",
                        "--iters", "40", "--seed", "0", "--out", str(trace),
                        "--best-config", str(best)]) == 0
        est = d / "estimate.json"
        assert cli_run(["estimate", "--config", str(best),
                        "--out", str(est)]) == 0
        teacher = d / "teacher.json"
        assert cli_run(["train-teacher", "--data", str(d / "data_train.csv"),
                        "--epochs", "10", "--seed", "0",
                        "--out", str(teacher)]) == 0
        t_report = d / "teacher_report.json"
        assert cli_run(["evaluate", "--model", str(teacher),
                        "--data", str(d / "data_test.csv"),
                        "--model-name", "teacher",
                        "--out", str(t_report)]) == 0
        student = d / "student.json"
        curve = d / "curve.csv"
        assert cli_run(["distill", "--teacher", str(teacher),
                        "--student-arch", "16,4,4",
                        "--data", str(d / "data_train.csv"),
                        "--epochs", "8", "--seed", "0",
                        "--out", str(student), "--curve", str(curve)]) == 0
        s_report = d / "student_report.json"
        results = d / "results.csv"
        assert cli_run(["evaluate", "--model", str(student),
                        "--data", str(d / "data_test.csv"),
                        "--model-name", "student",
                        "--baseline", str(t_report),
                        "--out", str(s_report),
                        "--results", str(results)]) == 0
        names = ["data.csv", "data_train.csv", "data_val.csv", "data_test.csv",
                 "trace.csv", "best.json", "estimate.json", "teacher.json",
                 "teacher_report.json", "student.json", "curve.csv",
                 "student_report.json", "results.csv"]
        return {name: (d / name).read_bytes() for name in names}

    first = one_pass(tmp_path / "first")
    second = one_pass(tmp_path / "second")
    identical = first == second

    report = json.loads(first["student_report.json"].decode())
    fields_ok = {"model", "accuracy", "mcc", "model_size_mb",
                 "acc_drop_pct"} <= set(report)

    _report(10, "pipeline reproducibility", identical and fields_ok,
            f"{len(first)} artifacts byte-identical across independent reruns")
