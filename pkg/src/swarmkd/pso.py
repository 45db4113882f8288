"""Particle swarm search for small architectures under a size budget.

The swarm moves through [0, 1]^D; every evaluation decodes a position
onto the grid and scores the resulting architecture. Fitness rewards
forward compute while penalizing the size gap to the reference model:

    fitness = gflops - |teacher_size_gb - size_gb|

subject to a hard budget: architectures over ``budget_mb`` (or with an
indivisible hidden/head pair) score -inf.

Updates are synchronous: all particles are evaluated against the swarm
state of the previous iteration, then personal and global bests are
refreshed in a single serial step. Fitness evaluation is pure, so the
evaluations inside one iteration could run in parallel without changing
results; the RNG is only ever touched by the serial step.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .config_space import ArchitectureConfig, ConfigSpace, decode
from .cost_model import estimate, teacher_estimate

NO_FEASIBLE_MSG = "no feasible architecture under budget"


class SearchError(RuntimeError):
    pass


@dataclass(frozen=True)
class FitnessSpec:
    """Everything the objective needs besides the candidate itself."""

    teacher_size_gb: float
    budget_mb: float
    seq_len: int = 512

    def __post_init__(self) -> None:
        if self.teacher_size_gb <= 0:
            raise ValueError("teacher_size_gb must be positive")
        if self.budget_mb <= 0:
            raise ValueError("budget_mb must be positive")
        if self.seq_len < 1:
            raise ValueError("seq_len must be >= 1")


def default_fitness_spec(budget_mb: float, seq_len: int = 512) -> FitnessSpec:
    return FitnessSpec(
        teacher_size_gb=teacher_estimate(seq_len).size_gb,
        budget_mb=budget_mb,
        seq_len=seq_len,
    )


def fitness(cfg: ArchitectureConfig, spec: FitnessSpec) -> float:
    """Objective value; -inf for infeasible candidates."""
    if cfg.num_attention_heads <= 0 or cfg.hidden_size % cfg.num_attention_heads != 0:
        return -math.inf
    est = estimate(cfg, spec.seq_len)
    if est.size_mb > spec.budget_mb:
        return -math.inf
    return est.gflops - abs(spec.teacher_size_gb - est.size_gb)


@dataclass(frozen=True)
class PsoParams:
    swarm_size: int = 200
    max_iter: int = 150
    inertia_w: float = 0.9
    c1: float = 2.0
    c2: float = 2.0
    v_max: float = 0.2
    seed: int = 0

    def __post_init__(self) -> None:
        if self.swarm_size < 1:
            raise ValueError("swarm_size must be >= 1")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if self.inertia_w < 0:
            raise ValueError("inertia_w must be >= 0")
        if self.c1 < 0 or self.c2 < 0:
            raise ValueError("acceleration coefficients must be >= 0")
        if not 0 < self.v_max <= 1:
            raise ValueError("v_max must be in (0, 1]")


@dataclass(frozen=True)
class Particle:
    """Snapshot of one particle, used by inspection callbacks."""

    position: np.ndarray
    velocity: np.ndarray
    p_best_position: np.ndarray
    p_best_fitness: float


@dataclass(frozen=True)
class SearchTrace:
    """Search result. ``g_best_fitness[0]`` is the best initial particle;
    each later entry is the best after one full iteration.

    Everything except ``wall_time`` is a pure function of (space, params,
    spec), so repeated runs reproduce it bit for bit.
    """

    g_best_fitness: tuple[float, ...]
    best_config: ArchitectureConfig
    wall_time: float
    evaluations: int

    @property
    def best_fitness(self) -> float:
        return self.g_best_fitness[-1]


def _step_velocity(
    v: np.ndarray,
    x: np.ndarray,
    pbest: np.ndarray,
    gbest: np.ndarray,
    w: float,
    c1: float,
    c2: float,
    v_max: float,
    r1: np.ndarray,
    r2: np.ndarray,
) -> np.ndarray:
    """One synchronous velocity update, clamped to [-v_max, v_max]."""
    v_new = w * v + c1 * r1 * (pbest - x) + c2 * r2 * (gbest[None, :] - x)
    return np.clip(v_new, -v_max, v_max)


def pso_search(
    space: ConfigSpace,
    params: PsoParams,
    spec: FitnessSpec,
    on_iteration: Callable[[int, list[Particle]], None] | None = None,
) -> SearchTrace:
    """Run the swarm and return its trace.

    Raises :class:`SearchError` if no evaluated candidate was ever
    feasible under the budget.
    """
    start = time.perf_counter()
    rng = np.random.default_rng(params.seed)
    dim = len(space.searchable)
    n = params.swarm_size

    x = rng.uniform(0.0, 1.0, size=(n, dim))
    v = rng.uniform(-params.v_max, params.v_max, size=(n, dim))
    fit = np.array([fitness(decode(x[i], space), spec) for i in range(n)])
    evaluations = n

    pbest_x = x.copy()
    pbest_f = fit.copy()
    g = int(np.argmax(pbest_f))
    gbest_x = pbest_x[g].copy()
    gbest_f = float(pbest_f[g])

    trace = [gbest_f]
    if on_iteration is not None:
        on_iteration(0, _snapshot(x, v, pbest_x, pbest_f))

    for it in range(1, params.max_iter + 1):
        r1 = rng.uniform(size=(n, dim))
        r2 = rng.uniform(size=(n, dim))
        v = _step_velocity(v, x, pbest_x, gbest_x, params.inertia_w,
                           params.c1, params.c2, params.v_max, r1, r2)
        x = np.clip(x + v, 0.0, 1.0)

        fit = np.array([fitness(decode(x[i], space), spec) for i in range(n)])
        evaluations += n

        improved = fit > pbest_f
        pbest_x[improved] = x[improved]
        pbest_f[improved] = fit[improved]
        g = int(np.argmax(pbest_f))
        if pbest_f[g] > gbest_f:
            gbest_f = float(pbest_f[g])
            gbest_x = pbest_x[g].copy()

        trace.append(gbest_f)
        if on_iteration is not None:
            on_iteration(it, _snapshot(x, v, pbest_x, pbest_f))

    if math.isinf(gbest_f) and gbest_f < 0:
        raise SearchError(NO_FEASIBLE_MSG)

    return SearchTrace(
        g_best_fitness=tuple(trace),
        best_config=decode(gbest_x, space),
        wall_time=time.perf_counter() - start,
        evaluations=evaluations,
    )


def _snapshot(x, v, pbest_x, pbest_f) -> list[Particle]:
    return [
        Particle(x[i].copy(), v[i].copy(), pbest_x[i].copy(), float(pbest_f[i]))
        for i in range(x.shape[0])
    ]


def timing_runs(search_fn, space, params, spec, runs: int) -> list[float]:
    """Wall times of ``runs`` independent searches with stepped seeds."""
    if runs < 1:
        raise ValueError("runs must be >= 1")
    times = []
    for k in range(runs):
        trace = search_fn(space, replace(params, seed=params.seed + k), spec)
        times.append(trace.wall_time)
    return times


def repeat_timing(search_fn, space, params, spec, runs: int = 5) -> float:
    """Arithmetic mean wall time over independent seeded runs."""
    return float(np.mean(timing_runs(search_fn, space, params, spec, runs)))


def paired_timing(
    search_a, params_a, search_b, params_b, space, spec,
    runs: int = 5, warmup: bool = True,
) -> tuple[list[float], list[float]]:
    """Interleaved wall-time pairs for two search procedures.

    Runs a then b with the same stepped seed in each pair, so slow
    ambient drift lands on both procedures evenly instead of biasing
    whichever batch ran last. ``warmup`` makes one untimed full-size run
    of each path first, keeping allocator and cache effects out of the
    first pair. Returns ``(times_a, times_b)``.
    """
    if runs < 1:
        raise ValueError("runs must be >= 1")
    if warmup:
        search_a(space, params_a, spec)
        search_b(space, params_b, spec)
    times_a, times_b = [], []
    for k in range(runs):
        trace = search_a(space, replace(params_a, seed=params_a.seed + k), spec)
        times_a.append(trace.wall_time)
        trace = search_b(space, replace(params_b, seed=params_b.seed + k), spec)
        times_b.append(trace.wall_time)
    return times_a, times_b
