"""Hyperparameter grid for compact BERT-style encoder architectures.

Thirteen hyperparameters describe one architecture. Six of them are
searchable (vocabulary size, depth, hidden width, feed-forward width,
attention heads, learning rate); the rest are pinned to the reference
encoder's settings. Optimizers work on continuous position vectors in
[0, 1]^D that round onto grid indices, so the same encode/decode
machinery serves the full space and any reduced variant of it.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from typing import Any, Sequence

import numpy as np

KIND_INTEGER = "integer-grid"
KIND_CATEGORICAL = "categorical"
KIND_FIXED = "fixed"

_KINDS = (KIND_INTEGER, KIND_CATEGORICAL, KIND_FIXED)

# Canonical dimension order. Serialization and position vectors both
# follow it, so it must not change between releases.
DIM_ORDER = (
    "tokenizer",
    "vocab_size",
    "num_hidden_layers",
    "hidden_size",
    "hidden_act",
    "hidden_dropout_prob",
    "intermediate_size",
    "num_attention_heads",
    "attention_probs_dropout_prob",
    "max_sequence_length",
    "position_embedding_type",
    "learning_rate",
    "batch_size",
)


@dataclass(frozen=True)
class HyperparamDef:
    """One hyperparameter: its admissible grid plus bookkeeping flags.

    ``teacher`` is the reference encoder's value for this dimension. It
    may sit off the search grid (the reference vocabulary of 50265 does),
    in which case it is representable but never reachable by a search.
    """

    name: str
    kind: str
    grid: tuple
    affects_size: bool = False
    teacher: Any = None

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown kind {self.kind!r} for {self.name}")
        if not isinstance(self.grid, tuple):
            object.__setattr__(self, "grid", tuple(self.grid))
        if len(self.grid) == 0:
            raise ValueError(f"{self.name}: empty grid")
        if self.kind == KIND_FIXED and len(self.grid) != 1:
            raise ValueError(f"{self.name}: fixed dimension needs exactly one value")
        if self.kind == KIND_INTEGER:
            if any(int(v) != v for v in self.grid):
                raise ValueError(f"{self.name}: integer grid holds a non-integer")
            if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
                raise ValueError(f"{self.name}: grid must be strictly increasing")

    @classmethod
    def integer_grid(
        cls,
        name: str,
        lo: int,
        hi: int,
        interval: int,
        affects_size: bool = False,
        teacher: Any = None,
    ) -> "HyperparamDef":
        """Grid lo, lo+interval, ... up to the largest value <= hi."""
        if interval <= 0:
            raise ValueError(f"{name}: interval must be positive")
        if hi < lo:
            raise ValueError(f"{name}: empty range [{lo}, {hi}]")
        grid = tuple(range(lo, hi + 1, interval))
        return cls(name, KIND_INTEGER, grid, affects_size, teacher)

    @property
    def searchable(self) -> bool:
        return self.kind != KIND_FIXED


@dataclass(frozen=True)
class ConfigSpace:
    """Ordered collection of the thirteen hyperparameter definitions."""

    dims: tuple[HyperparamDef, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.dims, tuple):
            object.__setattr__(self, "dims", tuple(self.dims))
        names = tuple(d.name for d in self.dims)
        if names != DIM_ORDER:
            raise ValueError(
                f"space must define exactly the canonical dimensions in order, got {names}"
            )

    def dim(self, name: str) -> HyperparamDef:
        for d in self.dims:
            if d.name == name:
                return d
        raise KeyError(name)

    @property
    def searchable(self) -> tuple[HyperparamDef, ...]:
        return tuple(d for d in self.dims if d.searchable)


@dataclass(frozen=True)
class ArchitectureConfig:
    """One concrete architecture plus its training hyperparameters.

    Field names double as the serialization schema, so they follow the
    lowercase_with_underscores convention everywhere.
    """

    vocab_size: int
    num_hidden_layers: int
    hidden_size: int
    intermediate_size: int
    num_attention_heads: int
    learning_rate: float
    tokenizer: str = "Byte-Pair Encoding"
    hidden_act: str = "GELU"
    hidden_dropout_prob: float = 0.1
    attention_probs_dropout_prob: float = 0.1
    max_sequence_length: int = 512
    position_embedding_type: str = "absolute"
    batch_size: int = 32


def default_space() -> ConfigSpace:
    """The full search space around the reference encoder."""
    dims = (
        HyperparamDef("tokenizer", KIND_FIXED, ("Byte-Pair Encoding",),
                      teacher="Byte-Pair Encoding"),
        HyperparamDef.integer_grid("vocab_size", 1000, 50265, 1000,
                                   affects_size=True, teacher=50265),
        HyperparamDef.integer_grid("num_hidden_layers", 1, 12, 1,
                                   affects_size=True, teacher=12),
        HyperparamDef.integer_grid("hidden_size", 16, 768, 16,
                                   affects_size=True, teacher=768),
        HyperparamDef("hidden_act", KIND_FIXED, ("GELU",), teacher="GELU"),
        HyperparamDef("hidden_dropout_prob", KIND_FIXED, (0.1,), teacher=0.1),
        HyperparamDef.integer_grid("intermediate_size", 16, 3072, 32,
                                   affects_size=True, teacher=3072),
        HyperparamDef.integer_grid("num_attention_heads", 1, 12, 1,
                                   affects_size=True, teacher=12),
        HyperparamDef("attention_probs_dropout_prob", KIND_FIXED, (0.1,), teacher=0.1),
        HyperparamDef("max_sequence_length", KIND_FIXED, (512,), teacher=512),
        HyperparamDef("position_embedding_type", KIND_FIXED, ("absolute",),
                      teacher="absolute"),
        HyperparamDef("learning_rate", KIND_CATEGORICAL,
                      (1e-5, 5e-5, 1e-4, 2e-4, 5e-4, 1e-3, 2e-3), teacher=5e-5),
        HyperparamDef("batch_size", KIND_FIXED, (32,), teacher=32),
    )
    return ConfigSpace(dims)


def teacher_config() -> ArchitectureConfig:
    """The reference encoder itself. Vocabulary and feed-forward width sit
    off the search grid; they come from the dedicated teacher column."""
    return ArchitectureConfig(
        vocab_size=50265,
        num_hidden_layers=12,
        hidden_size=768,
        intermediate_size=3072,
        num_attention_heads=12,
        learning_rate=5e-5,
    )


def restricted_space(
    fixed: dict[str, Any] | None = None,
    grids: dict[str, Sequence] | None = None,
) -> ConfigSpace:
    """Reduced variant of the default space for small experiments.

    ``fixed`` pins dimensions to single values; ``grids`` swaps in custom
    value lists while keeping a dimension searchable (unless the list has
    one entry, which degenerates to fixed).
    """
    fixed = dict(fixed or {})
    grids = dict(grids or {})
    overlap = set(fixed) & set(grids)
    if overlap:
        raise ValueError(f"dimensions given both as fixed and as grids: {sorted(overlap)}")
    unknown = (set(fixed) | set(grids)) - set(DIM_ORDER)
    if unknown:
        raise ValueError(f"unknown dimensions: {sorted(unknown)}")
    dims = []
    for d in default_space().dims:
        if d.name in fixed:
            dims.append(replace(d, kind=KIND_FIXED, grid=(fixed[d.name],)))
        elif d.name in grids:
            new = tuple(grids[d.name])
            kind = KIND_FIXED if len(new) == 1 else d.kind
            dims.append(replace(d, kind=kind, grid=new))
        else:
            dims.append(d)
    return ConfigSpace(tuple(dims))


def validate(cfg: ArchitectureConfig, space: ConfigSpace) -> list[str]:
    """Every grid-membership and divisibility violation, empty if valid.

    A dimension's teacher value counts as admissible even when it sits
    off the grid, so the reference encoder validates cleanly.
    """
    violations = []
    for d in space.dims:
        value = getattr(cfg, d.name)
        if value in d.grid:
            continue
        if d.teacher is not None and value == d.teacher:
            continue
        violations.append(f"{d.name}={value!r} not on grid")
    if cfg.num_attention_heads > 0 and cfg.hidden_size % cfg.num_attention_heads != 0:
        violations.append(
            f"hidden_size {cfg.hidden_size} not divisible by "
            f"num_attention_heads {cfg.num_attention_heads}"
        )
    return violations


def space_cardinality(space: ConfigSpace, enforce_divisibility: bool = False) -> int:
    """Number of distinct searchable assignments.

    Without the divisibility constraint this is a plain product of grid
    sizes. With it, the (hidden_size, heads) contribution is the exact
    count of zero-remainder pairs.
    """
    if not enforce_divisibility:
        count = 1
        for d in space.searchable:
            count *= len(d.grid)
        return count
    hidden = space.dim("hidden_size")
    heads = space.dim("num_attention_heads")
    pairs = sum(1 for h in hidden.grid for k in heads.grid if h % k == 0)
    count = pairs
    for d in space.searchable:
        if d.name in ("hidden_size", "num_attention_heads"):
            continue
        count *= len(d.grid)
    return count


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def decode(position: Sequence[float], space: ConfigSpace) -> ArchitectureConfig:
    """Map a continuous position in [0, 1]^D onto a grid point.

    Each coordinate is clamped to [0, 1] and rounded (half up) onto the
    index range of its grid. Grid membership is guaranteed by
    construction; the divisibility constraint is not, which is why
    fitness evaluation re-checks it.
    """
    searchable = space.searchable
    if len(position) != len(searchable):
        raise ValueError(
            f"position has {len(position)} coordinates, space has {len(searchable)}"
        )
    values: dict[str, Any] = {}
    for coord, d in zip(position, searchable):
        c = min(1.0, max(0.0, float(coord)))
        n = len(d.grid)
        idx = 0 if n == 1 else _round_half_up(c * (n - 1))
        values[d.name] = d.grid[idx]
    for d in space.dims:
        if not d.searchable:
            values[d.name] = d.grid[0]
    return ArchitectureConfig(**values)


def encode(cfg: ArchitectureConfig, space: ConfigSpace) -> np.ndarray:
    """Inverse of :func:`decode` for on-grid configurations.

    Off-grid teacher values have no index, so the reference encoder is
    deliberately not encodable.
    """
    searchable = space.searchable
    coords = np.empty(len(searchable), dtype=float)
    for j, d in enumerate(searchable):
        value = getattr(cfg, d.name)
        try:
            idx = d.grid.index(value)
        except ValueError:
            raise ValueError(f"{d.name}={value!r} not on grid, cannot encode") from None
        n = len(d.grid)
        coords[j] = 0.0 if n == 1 else idx / (n - 1)
    return coords


def config_to_dict(cfg: ArchitectureConfig) -> dict[str, Any]:
    return {name: getattr(cfg, name) for name in DIM_ORDER}


def config_from_dict(d: dict[str, Any]) -> ArchitectureConfig:
    unknown = set(d) - set(DIM_ORDER)
    if unknown:
        raise ValueError(f"unknown fields: {sorted(unknown)}")
    return ArchitectureConfig(**d)


def save_config(cfg: ArchitectureConfig, path) -> None:
    with open(path, "w") as fh:
        json.dump(config_to_dict(cfg), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_config(path) -> ArchitectureConfig:
    with open(path) as fh:
        return config_from_dict(json.load(fh))


def space_to_dict(space: ConfigSpace) -> dict[str, Any]:
    return {
        "dims": [
            {
                "name": d.name,
                "kind": d.kind,
                "grid": list(d.grid),
                "affects_size": d.affects_size,
                "teacher": d.teacher,
            }
            for d in space.dims
        ]
    }


def space_from_dict(payload: dict[str, Any]) -> ConfigSpace:
    dims = tuple(
        HyperparamDef(
            name=entry["name"],
            kind=entry["kind"],
            grid=tuple(entry["grid"]),
            affects_size=entry["affects_size"],
            teacher=entry.get("teacher"),
        )
        for entry in payload["dims"]
    )
    return ConfigSpace(dims)
