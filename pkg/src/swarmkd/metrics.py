"""Classification metrics: accuracy, multiclass MCC, relative drops.

The Matthews coefficient comes from the confusion matrix C:

    mcc = (c * s - sum_k p_k * t_k)
          / sqrt((s^2 - sum_k p_k^2) * (s^2 - sum_k t_k^2))

with c = trace(C), s = total count, t_k = row sums (true counts), and
p_k = column sums (predicted counts). Degenerate denominators (all-one
class in truth or prediction) yield 0 by convention.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np


def _as_labels(pred, truth) -> tuple[np.ndarray, np.ndarray]:
    pred = np.asarray(pred)
    truth = np.asarray(truth)
    if pred.shape != truth.shape or pred.ndim != 1:
        raise ValueError("pred and truth must be 1-D and of equal length")
    if pred.size == 0:
        raise ValueError("empty label sequences")
    return pred.astype(np.int64), truth.astype(np.int64)


def accuracy(pred, truth) -> float:
    pred, truth = _as_labels(pred, truth)
    return float((pred == truth).mean())


def confusion_matrix(pred, truth, n_classes: int) -> np.ndarray:
    """C[i, j] counts examples with true class i predicted as class j."""
    pred, truth = _as_labels(pred, truth)
    if pred.min() < 0 or truth.min() < 0 or pred.max() >= n_classes or truth.max() >= n_classes:
        raise ValueError(f"labels out of range for {n_classes} classes")
    mat = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(mat, (truth, pred), 1)
    return mat


def mcc(pred, truth, n_classes: int = 4) -> float:
    """Multiclass Matthews correlation coefficient in [-1, 1]."""
    mat = confusion_matrix(pred, truth, n_classes)
    t = mat.sum(axis=1)  # true counts per class
    p = mat.sum(axis=0)  # predicted counts per class
    s = int(mat.sum())
    c = int(np.trace(mat))
    numerator = c * s - int(p @ t)
    denom_sq = (s * s - int(p @ p)) * (s * s - int(t @ t))
    if denom_sq <= 0:
        return 0.0
    return float(numerator / math.sqrt(denom_sq))


def drop_pct(base: float, other: float) -> float:
    """Relative drop from ``base`` to ``other`` in percent."""
    if base == 0:
        raise ValueError("base metric is zero, drop undefined")
    return (base - other) / base * 100.0


@dataclass(frozen=True)
class EvalReport:
    """One model's evaluation summary.

    ``time_cost_s`` is a recorded figure (training or inference time fed
    in by the caller), not something measured here: reports must be
    byte-reproducible under a fixed seed. Drop fields are None when no
    baseline was supplied.
    """

    model: str
    accuracy: float
    mcc: float
    model_size_mb: float
    time_cost_s: float | None = None
    acc_drop_pct: float | None = None
    mcc_drop_pct: float | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def eval_report(
    model_name: str,
    pred,
    truth,
    model_size_mb: float,
    n_classes: int = 4,
    baseline: "EvalReport | None" = None,
    time_cost_s: float | None = None,
) -> EvalReport:
    acc = accuracy(pred, truth)
    m = mcc(pred, truth, n_classes)
    return EvalReport(
        model=model_name,
        accuracy=acc,
        mcc=m,
        model_size_mb=model_size_mb,
        time_cost_s=time_cost_s,
        acc_drop_pct=None if baseline is None else drop_pct(baseline.accuracy, acc),
        mcc_drop_pct=None if baseline is None else drop_pct(baseline.mcc, m),
    )
