"""Seeded Monte Carlo simulation of opening pairs of boxes.

Each context ``(i, i+1)`` is sampled from its exact joint outcome
distribution using one uniform draw per shot.  Context ``i`` gets its own
generator seeded with ``(seed, i)``, so its counts do not depend on how many
other contexts are sampled or in what order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from .errors import InvalidScenario
from .linalg import ORTHO_TOL, joint_distribution
from .scenario import CycleScenario, validate_scenario

OUTCOMES = ((0, 0), (0, 1), (1, 0), (1, 1))


def context_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, index]))


def sample_context(
    state: ArrayLike,
    vi: ArrayLike,
    vj: ArrayLike,
    shots: int,
    rng: np.random.Generator,
    tol: float = ORTHO_TOL,
) -> dict[tuple[int, int], int]:
    """Draw ``shots`` joint outcomes for the compatible pair (vi, vj)."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    dist = joint_distribution(state, vi, vj, tol)
    # (1, 1) has probability exactly 0 and is left out of the inverse CDF.
    edges = np.array([dist[0, 0], dist[0, 0] + dist[0, 1]])
    u = rng.random(shots)
    idx = np.searchsorted(edges, u, side="right")
    counts = np.bincount(idx, minlength=3)
    return {
        (0, 0): int(counts[0]),
        (0, 1): int(counts[1]),
        (1, 0): int(counts[2]),
        (1, 1): 0,
    }


@dataclass(frozen=True)
class SampleReport:
    label: str
    n: int
    shots: int
    seed: int
    counts: dict[tuple[int, int, int, int], int]
    estimates: dict[tuple[int, int, int, int], float]
    standard_errors: dict[tuple[int, int, int, int], float]

    def estimate(self, i: int, j: int, a: int, b: int) -> float:
        return self.estimates[i, j, a, b]

    def cycle_sum(self) -> float:
        return sum(self.estimates[i, i % self.n + 1, 0, 1] for i in range(1, self.n + 1))

    def cycle_sum_error(self) -> float:
        # Contexts are sampled independently, so variances add.
        return math.sqrt(
            sum(self.standard_errors[i, i % self.n + 1, 0, 1] ** 2 for i in range(1, self.n + 1))
        )

    def condition_sums(self) -> list[float]:
        return [
            self.estimates[2 * j - 1, 2 * j, 0, 1] + self.estimates[2 * j, 2 * j + 1, 0, 1]
            for j in range(1, (self.n - 1) // 2 + 1)
        ]

    def hardy_prob(self) -> float:
        return self.estimates[self.n, 1, 0, 1]


def run_experiment(s: CycleScenario, shots: int, seed: int) -> SampleReport:
    violations = validate_scenario(s)
    if violations:
        raise InvalidScenario("; ".join(map(str, violations)))
    counts, estimates, errors = {}, {}, {}
    for i, j in s.contexts():
        ctx = sample_context(s.state, s.vector(i), s.vector(j), shots, context_rng(seed, i), s.tolerance)
        for (a, b), c in ctx.items():
            p = c / shots
            counts[i, j, a, b] = c
            estimates[i, j, a, b] = p
            errors[i, j, a, b] = math.sqrt(p * (1.0 - p) / shots)
    return SampleReport(s.label, s.n, shots, seed, counts, estimates, errors)
