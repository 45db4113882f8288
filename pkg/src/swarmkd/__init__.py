"""Swarm search of compact encoder architectures plus knowledge distillation."""

__version__ = "0.1.0"

from .config_space import (
    ArchitectureConfig,
    ConfigSpace,
    HyperparamDef,
    decode,
    default_space,
    encode,
    restricted_space,
    space_cardinality,
    teacher_config,
    validate,
)
from .cost_model import CostEstimate, compression_ratio, estimate, forward_gflops, param_count
from .data import LabeledDataset, gen_synthetic, stratified_split
from .distill import (
    Classifier,
    DistillParams,
    MlpClassifier,
    distill_train,
    kd_loss,
    kl_div,
    soften,
    train_supervised,
)
from .ga import GaParams, ga_search
from .metrics import EvalReport, accuracy, drop_pct, mcc
from .pso import (
    FitnessSpec,
    PsoParams,
    SearchError,
    SearchTrace,
    default_fitness_spec,
    fitness,
    paired_timing,
    pso_search,
    repeat_timing,
    timing_runs,
)

__all__ = [
    "ArchitectureConfig",
    "Classifier",
    "ConfigSpace",
    "CostEstimate",
    "DistillParams",
    "EvalReport",
    "FitnessSpec",
    "GaParams",
    "HyperparamDef",
    "LabeledDataset",
    "MlpClassifier",
    "PsoParams",
    "SearchError",
    "SearchTrace",
    "accuracy",
    "compression_ratio",
    "decode",
    "default_fitness_spec",
    "default_space",
    "distill_train",
    "drop_pct",
    "encode",
    "estimate",
    "fitness",
    "forward_gflops",
    "ga_search",
    "gen_synthetic",
    "kd_loss",
    "kl_div",
    "mcc",
    "paired_timing",
    "param_count",
    "pso_search",
    "repeat_timing",
    "restricted_space",
    "soften",
    "space_cardinality",
    "stratified_split",
    "teacher_config",
    "timing_runs",
    "train_supervised",
    "validate",
]
