"""Shared helpers: reduced search spaces, the exhaustive oracle, and the
acceptance scorecard printed after the run."""

from __future__ import annotations

import itertools
import math

import pytest

from swarmkd import restricted_space, fitness
from swarmkd.config_space import ArchitectureConfig

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def brute_force_best(space, spec):
    """Exhaustive enumeration of every searchable assignment.

    Returns (best_fitness, best_config, points). Infeasible points score
    -inf like they do for the searchers.
    """
    searchable = space.searchable
    grids = [d.grid for d in searchable]
    names = [d.name for d in searchable]
    fixed = {d.name: d.grid[0] for d in space.dims if not d.searchable}
    best = -math.inf
    best_cfg = None
    points = 0
    for combo in itertools.product(*grids):
        cfg = ArchitectureConfig(**fixed, **dict(zip(names, combo)))
        points += 1
        value = fitness(cfg, spec)
        if value > best:
            best = value
            best_cfg = cfg
    return best, best_cfg, points


def space_hidden_by_layers():
    """hidden_size x num_hidden_layers, 576 points."""
    return restricted_space(fixed={
        "vocab_size": 1000,
        "intermediate_size": 1008,
        "num_attention_heads": 4,
        "learning_rate": 5e-4,
    })


def space_vocab_by_intermediate():
    """vocab_size x intermediate_size, 4800 points."""
    return restricted_space(fixed={
        "num_hidden_layers": 4,
        "hidden_size": 128,
        "num_attention_heads": 8,
        "learning_rate": 5e-4,
    })


def space_hidden_by_heads():
    """hidden_size x num_attention_heads, 576 points, divisibility bites."""
    return restricted_space(fixed={
        "vocab_size": 5000,
        "num_hidden_layers": 6,
        "intermediate_size": 1520,
        "learning_rate": 5e-4,
    })


@pytest.fixture(scope="session")
def tiny_space():
    return space_hidden_by_layers()
