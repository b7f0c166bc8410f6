import math

import numpy as np
import pytest

from hardy_contextuality import (
    IncompatiblePair,
    InvalidScenario,
    hardy_family,
    pentagon,
    run_experiment,
    sample_context,
)
from hardy_contextuality.sampler import context_rng

P = pentagon()


def test_counts_sum_and_no_11():
    counts = sample_context(P.state, P.vector(1), P.vector(2), 5000, np.random.default_rng(0))
    assert sum(counts.values()) == 5000
    assert counts[1, 1] == 0


def test_deterministic_outcome():
    counts = sample_context(P.vector(2), P.vector(1), P.vector(2), 1000, np.random.default_rng(1))
    assert counts[0, 1] == 1000


def test_incompatible_context():
    with pytest.raises(IncompatiblePair):
        sample_context(P.state, P.vector(1), P.vector(3), 10, np.random.default_rng(0))


def test_large_sample_converges():
    counts = sample_context(P.state, P.vector(1), P.vector(2), 200_000, np.random.default_rng(2))
    p = counts[0, 1] / 200_000
    assert abs(p - 2 / 3) < 5 * math.sqrt(2 / 9 / 200_000)


def test_run_experiment_pentagon():
    rep = run_experiment(P, 100_000, seed=4)
    for i, j in P.contexts():
        assert sum(rep.counts[i, j, a, b] for a in (0, 1) for b in (0, 1)) == 100_000
        assert rep.counts[i, j, 1, 1] == 0
        for a in (0, 1):
            for b in (0, 1):
                assert rep.estimates[i, j, a, b] == rep.counts[i, j, a, b] / 100_000
    assert abs(rep.cycle_sum() - (2 + 1 / 9)) < 5 * rep.cycle_sum_error()
    assert len(rep.condition_sums()) == 2


def test_run_experiment_deterministic():
    a = run_experiment(P, 2000, seed=9)
    b = run_experiment(P, 2000, seed=9)
    assert a == b
    assert run_experiment(P, 2000, seed=10).counts != a.counts


def test_context_stream_independent_of_other_contexts():
    # Context 1 of a 5-cycle and of a 9-cycle use the same stream for the same seed.
    assert context_rng(5, 1).random() == context_rng(5, 1).random()
    big = hardy_family(2)
    r5 = run_experiment(P, 1000, seed=7)
    counts = sample_context(P.state, P.vector(1), P.vector(2), 1000, context_rng(7, 1))
    assert {k[2:]: v for k, v in r5.counts.items() if k[:2] == (1, 2)} == counts
    assert run_experiment(big, 10, seed=7).n == 9


def test_invalid_scenario_rejected():
    with pytest.raises(InvalidScenario):
        run_experiment(P.with_vector(2, [1, 0, 0]), 10, seed=0)


def test_coverage_over_repetitions():
    shots = 10_000
    exact = {(i, j, a, b): P.prob(i, j, a, b) for i, j in P.contexts() for a in (0, 1) for b in (0, 1)}
    covered = 0
    for seed in range(100):
        rep = run_experiment(P, shots, seed)
        if all(
            abs(rep.estimates[key] - p) <= 5 * math.sqrt(p * (1 - p) / shots) + 1e-15
            for key, p in exact.items()
        ):
            covered += 1
    assert covered >= 99
