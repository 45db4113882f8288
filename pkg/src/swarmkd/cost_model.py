"""Analytic parameter, size, and compute estimates for encoder configs.

Counts follow the standard BERT-style layout: token/position embeddings
with a single token-type row and an embedding layer norm, per-layer
attention (QKVO projections with bias) plus feed-forward block with two
layer norms, and a tanh-pooler head feeding a 4-way classifier.

Sizes assume 4 bytes per parameter; MB means 2**20 bytes and GB means
2**30 bytes throughout. The FLOP figure is a forward-pass estimate of
the dominant matrix products only (projections, attention scores and
mixing, feed-forward), so it undercounts softmax, norms, and
activations by design.
"""

from __future__ import annotations

from dataclasses import dataclass

from .config_space import ArchitectureConfig, teacher_config

BYTES_PER_PARAM = 4
MB_BYTES = 2**20
NUM_CLASSES = 4


@dataclass(frozen=True)
class CostEstimate:
    """Derived cost figures for one architecture."""

    param_count: int
    size_mb: float
    size_gb: float
    gflops: float


def _check(cfg: ArchitectureConfig) -> None:
    for name in ("vocab_size", "num_hidden_layers", "hidden_size",
                 "intermediate_size", "num_attention_heads",
                 "max_sequence_length"):
        if getattr(cfg, name) <= 0:
            raise ValueError(f"invalid config: {name} must be positive")
    if cfg.hidden_size % cfg.num_attention_heads != 0:
        raise ValueError(
            f"invalid config: hidden_size {cfg.hidden_size} not divisible "
            f"by num_attention_heads {cfg.num_attention_heads}"
        )


def param_count(cfg: ArchitectureConfig) -> int:
    """Exact parameter count under the documented layout."""
    _check(cfg)
    h = cfg.hidden_size
    i = cfg.intermediate_size
    v = cfg.vocab_size
    n = cfg.max_sequence_length

    embeddings = v * h + n * h + h + 2 * h  # token, position, token-type, norm
    per_layer = (
        4 * (h * h + h)   # QKVO projections with bias
        + 2 * h           # attention output norm
        + (h * i + i)     # feed-forward up
        + (i * h + h)     # feed-forward down
        + 2 * h           # output norm
    )
    head = (h * h + h) + (h * NUM_CLASSES + NUM_CLASSES)  # pooler, classifier
    return embeddings + cfg.num_hidden_layers * per_layer + head


def forward_gflops(cfg: ArchitectureConfig, seq_len: int = 512) -> float:
    """Forward-pass GFLOPs for one sequence of ``seq_len`` tokens.

    Per layer: 8*n*h^2 for the QKVO projections, 4*n^2*h for attention
    scores plus value mixing, 4*n*h*i for the feed-forward block
    (multiply-accumulate counted as two operations each).
    """
    _check(cfg)
    if seq_len < 1:
        raise ValueError(f"seq_len must be >= 1, got {seq_len}")
    h = cfg.hidden_size
    i = cfg.intermediate_size
    n = seq_len
    flops = cfg.num_hidden_layers * (8 * n * h * h + 4 * n * n * h + 4 * n * h * i)
    return flops / 1e9


def estimate(cfg: ArchitectureConfig, seq_len: int = 512) -> CostEstimate:
    count = param_count(cfg)
    size_mb = count * BYTES_PER_PARAM / MB_BYTES
    return CostEstimate(
        param_count=count,
        size_mb=size_mb,
        size_gb=size_mb / 1024,
        gflops=forward_gflops(cfg, seq_len),
    )


def model_size(cfg: ArchitectureConfig) -> CostEstimate:
    """Size-focused view; identical to :func:`estimate` at seq_len 512."""
    return estimate(cfg)


def compression_ratio(student: CostEstimate, teacher: CostEstimate) -> float:
    """Fraction of teacher parameters the student retains."""
    if teacher.param_count <= 0:
        raise ValueError("teacher has no parameters")
    return student.param_count / teacher.param_count


def teacher_estimate(seq_len: int = 512) -> CostEstimate:
    return estimate(teacher_config(), seq_len)
