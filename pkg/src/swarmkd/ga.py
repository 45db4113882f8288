"""Genetic-algorithm baseline over the same encoded search space.

Individuals are the same [0, 1]^D vectors the swarm uses, decoded and
scored by the same fitness. Selection is k-way tournament, crossover is
uniform per gene, mutation resets a gene to a fresh uniform draw, and
the top individuals are carried over unchanged. With elitism >= 1 the
best-so-far trace is monotone, which makes traces directly comparable
to swarm traces at equal evaluation budgets.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .config_space import ConfigSpace, decode
from .pso import NO_FEASIBLE_MSG, FitnessSpec, SearchError, SearchTrace, fitness


@dataclass(frozen=True)
class GaParams:
    population: int = 200
    generations: int = 150
    crossover_p: float = 0.9
    mutation_p: float | None = None  # per gene; None means 1/D at run time
    tournament_k: int = 2
    elitism: int = 1
    seed: int = 0

    def __post_init__(self) -> None:
        if self.population < 2:
            raise ValueError("population must be >= 2")
        if self.generations < 1:
            raise ValueError("generations must be >= 1")
        if not 0 <= self.crossover_p <= 1:
            raise ValueError("crossover_p must be in [0, 1]")
        if self.mutation_p is not None and not 0 <= self.mutation_p <= 1:
            raise ValueError("mutation_p must be in [0, 1]")
        if self.tournament_k < 1:
            raise ValueError("tournament_k must be >= 1")
        if not 0 <= self.elitism < self.population:
            raise ValueError("elitism must be in [0, population)")


def _tournament(rng: np.random.Generator, fit: np.ndarray, count: int, k: int) -> np.ndarray:
    """Indices of ``count`` winners, each the best of k uniform draws."""
    draws = rng.integers(0, fit.shape[0], size=(count, k))
    best = np.argmax(fit[draws], axis=1)
    return draws[np.arange(count), best]


def ga_search(
    space: ConfigSpace,
    params: GaParams,
    spec: FitnessSpec,
    on_generation=None,
) -> SearchTrace:
    """Run the GA and return a trace of the same shape as the swarm's.

    Raises :class:`SearchError` if no evaluated candidate was ever
    feasible under the budget.
    """
    start = time.perf_counter()
    rng = np.random.default_rng(params.seed)
    dim = len(space.searchable)
    n = params.population
    mutation_p = params.mutation_p if params.mutation_p is not None else 1.0 / dim

    pop = rng.uniform(0.0, 1.0, size=(n, dim))
    fit = np.array([fitness(decode(pop[i], space), spec) for i in range(n)])
    evaluations = n

    g = int(np.argmax(fit))
    gbest_x = pop[g].copy()
    gbest_f = float(fit[g])
    trace = [gbest_f]
    if on_generation is not None:
        on_generation(0, pop.copy(), fit.copy())

    for gen in range(1, params.generations + 1):
        order = np.argsort(-fit, kind="stable")
        elites = pop[order[:params.elitism]].copy()

        n_children = n - params.elitism
        p1 = _tournament(rng, fit, n_children, params.tournament_k)
        p2 = _tournament(rng, fit, n_children, params.tournament_k)
        children = pop[p1].copy()
        cross = rng.random(n_children) < params.crossover_p
        take_p2 = rng.random((n_children, dim)) < 0.5
        take_p2 &= cross[:, None]
        children[take_p2] = pop[p2][take_p2]

        mutate = rng.random((n_children, dim)) < mutation_p
        children[mutate] = rng.uniform(0.0, 1.0, size=int(mutate.sum()))

        pop = np.concatenate([elites, children], axis=0)
        fit = np.array([fitness(decode(pop[i], space), spec) for i in range(n)])
        evaluations += n

        g = int(np.argmax(fit))
        if fit[g] > gbest_f:
            gbest_f = float(fit[g])
            gbest_x = pop[g].copy()

        trace.append(gbest_f)
        if on_generation is not None:
            on_generation(gen, pop.copy(), fit.copy())

    if math.isinf(gbest_f) and gbest_f < 0:
        raise SearchError(NO_FEASIBLE_MSG)

    return SearchTrace(
        g_best_fitness=tuple(trace),
        best_config=decode(gbest_x, space),
        wall_time=time.perf_counter() - start,
        evaluations=evaluations,
    )
