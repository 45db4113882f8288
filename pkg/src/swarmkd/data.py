"""Synthetic 4-class severity dataset and reproducible stratified splits.

Classes are Critical (0), High (1), Medium (2), Low (3). Features are
class-conditional isotropic unit-variance Gaussians whose means sit at
distinct corners of the centered unit hypercube scaled by ``separation``,
so task difficulty is a single knob: separation 10 is trivially
separable, while the default of 1.5 leaves enough class overlap that
model capacity shows up in the metrics.

All integer apportionment (class counts at generation time, per-class
split sizes) uses the largest-remainder method with documented
tie-breaks, so counts are exact and reproducible.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

SEVERITY_NAMES = ("Critical", "High", "Medium", "Low")
NUM_CLASSES = len(SEVERITY_NAMES)

# Class imbalance of the reference training corpus, used as the default
# generation mix.
_REFERENCE_TRAIN_COUNTS = (1169, 4454, 3795, 238)
DEFAULT_CLASS_PROBS = tuple(c / sum(_REFERENCE_TRAIN_COUNTS) for c in _REFERENCE_TRAIN_COUNTS)

DEFAULT_FEATURE_DIM = 16
DEFAULT_SEPARATION = 1.5


@dataclass
class LabeledDataset:
    features: np.ndarray
    labels: np.ndarray

    def __post_init__(self) -> None:
        self.features = np.asarray(self.features, dtype=float)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.features.ndim != 2:
            raise ValueError("features must be (N, F)")
        if self.labels.shape != (self.features.shape[0],):
            raise ValueError("labels must be (N,) matching features")
        if not np.isfinite(self.features).all():
            raise ValueError("features must be finite")
        if self.labels.size and (self.labels.min() < 0 or self.labels.max() >= NUM_CLASSES):
            raise ValueError(f"labels must lie in [0, {NUM_CLASSES})")

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def feature_dim(self) -> int:
        return self.features.shape[1]

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=NUM_CLASSES)

    def subset(self, indices) -> "LabeledDataset":
        idx = np.asarray(indices)
        return LabeledDataset(self.features[idx].copy(), self.labels[idx].copy())


def largest_remainder(total: int, quotas, tie_rank) -> list[int]:
    """Integer apportionment of ``total`` across fractional quotas.

    Floors every quota, then hands the leftover units to the largest
    remainders. ``tie_rank(i)`` orders equal remainders (smaller rank
    wins first).
    """
    quotas = [float(q) for q in quotas]
    base = [int(np.floor(q)) for q in quotas]
    remainders = [q - b for q, b in zip(quotas, base)]
    leftover = total - sum(base)
    if leftover < 0:
        raise ValueError("quotas exceed total")
    order = sorted(range(len(quotas)), key=lambda i: (-remainders[i], tie_rank(i)))
    for i in order[:leftover]:
        base[i] += 1
    return base


def class_counts_for(n: int, class_probs) -> list[int]:
    """Per-class counts for ``n`` examples under largest-remainder.

    Remainder ties go to the larger class first, then to the lower class
    index.
    """
    probs = [float(p) for p in class_probs]
    if len(probs) != NUM_CLASSES:
        raise ValueError(f"need {NUM_CLASSES} class probabilities")
    if any(p < 0 for p in probs):
        raise ValueError("class probabilities must be non-negative")
    if abs(sum(probs) - 1.0) > 1e-9:
        raise ValueError("class probabilities must sum to 1 within 1e-9")
    quotas = [n * p for p in probs]
    return largest_remainder(n, quotas, tie_rank=lambda i: (-probs[i], i))


def _class_mean(label: int, feature_dim: int, separation: float) -> np.ndarray:
    """Corner of the centered unit hypercube for this class, scaled.

    The two label bits pick the sign on even and odd feature dimensions,
    which keeps the four corners mutually distinct for any F >= 2.
    """
    b0 = label & 1
    b1 = (label >> 1) & 1
    mean = np.empty(feature_dim)
    even = 0.5 if b0 == 0 else -0.5
    odd = 0.5 if b1 == 0 else -0.5
    mean[0::2] = even
    mean[1::2] = odd
    return separation * mean


def class_means(feature_dim: int, separation: float) -> np.ndarray:
    return np.stack([_class_mean(k, feature_dim, separation) for k in range(NUM_CLASSES)])


def gen_synthetic(
    n: int,
    class_probs=DEFAULT_CLASS_PROBS,
    feature_dim: int = DEFAULT_FEATURE_DIM,
    separation: float = DEFAULT_SEPARATION,
    seed: int = 0,
) -> LabeledDataset:
    """Sample ``n`` labeled points with exact apportioned class counts."""
    if n < NUM_CLASSES:
        raise ValueError(f"n must be >= {NUM_CLASSES}")
    if feature_dim < 2:
        raise ValueError("feature_dim must be >= 2")
    if separation <= 0:
        raise ValueError("separation must be positive")
    counts = class_counts_for(n, class_probs)
    rng = np.random.default_rng(seed)
    means = class_means(feature_dim, separation)
    blocks = []
    labels = []
    for k, count in enumerate(counts):
        if count == 0:
            continue
        blocks.append(rng.standard_normal((count, feature_dim)) + means[k])
        labels.append(np.full(count, k, dtype=np.int64))
    features = np.concatenate(blocks, axis=0)
    labels = np.concatenate(labels)
    perm = rng.permutation(n)
    return LabeledDataset(features[perm], labels[perm])


def stratified_split(
    data: LabeledDataset,
    fractions=(0.8, 0.1, 0.1),
    seed: int = 0,
) -> tuple[LabeledDataset, LabeledDataset, LabeledDataset]:
    """Class-stratified partition into train/validation/test.

    Within each class, membership is a seeded shuffle and sizes follow
    largest-remainder apportionment of the class size across the
    fractions. Remainder ties go to the later split (test before
    validation before train), which is what lands an odd example in
    test. Raises if any occurring class would miss one of the splits.
    """
    fracs = [float(f) for f in fractions]
    if any(f <= 0 for f in fracs):
        raise ValueError("split fractions must be positive")
    if abs(sum(fracs) - 1.0) > 1e-9:
        raise ValueError("split fractions must sum to 1 within 1e-9")
    n_splits = len(fracs)
    rng = np.random.default_rng(seed)
    split_indices: list[list[np.ndarray]] = [[] for _ in range(n_splits)]
    for k in range(NUM_CLASSES):
        members = np.flatnonzero(data.labels == k)
        if members.size == 0:
            continue
        counts = largest_remainder(
            members.size,
            [members.size * f for f in fracs],
            tie_rank=lambda i: -i,
        )
        if any(c == 0 for c in counts):
            raise ValueError(
                f"class {SEVERITY_NAMES[k]} has {members.size} examples, "
                f"too small to appear in all splits"
            )
        shuffled = members[rng.permutation(members.size)]
        lo = 0
        for s, count in enumerate(counts):
            split_indices[s].append(shuffled[lo:lo + count])
            lo += count
    parts = []
    for s in range(n_splits):
        idx = np.concatenate(split_indices[s]) if split_indices[s] else np.empty(0, dtype=np.int64)
        parts.append(data.subset(idx))
    return tuple(parts)


def save_csv(data: LabeledDataset, path) -> None:
    """Write ``f0..f{F-1},label`` rows with severity names as labels."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"f{j}" for j in range(data.feature_dim)] + ["label"])
        for row, label in zip(data.features, data.labels):
            writer.writerow([repr(float(v)) for v in row] + [SEVERITY_NAMES[label]])


def load_csv(path) -> LabeledDataset:
    """Read a CSV written by :func:`save_csv`; label names are matched
    case-insensitively."""
    name_to_label = {name.lower(): k for k, name in enumerate(SEVERITY_NAMES)}
    features = []
    labels = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or header[-1] != "label":
            raise ValueError(f"{path}: expected a header ending in 'label'")
        for row in reader:
            if not row:
                continue
            key = row[-1].strip().lower()
            if key not in name_to_label:
                raise ValueError(f"{path}: unknown label {row[-1]!r}")
            features.append([float(v) for v in row[:-1]])
            labels.append(name_to_label[key])
    return LabeledDataset(np.asarray(features, dtype=float), np.asarray(labels, dtype=np.int64))
