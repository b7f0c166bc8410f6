"""Multi-start Nelder-Mead maximization over feasible cycle scenarios.

Both searches eliminate constraints through the parametrization, so every
evaluated point is an exactly valid scenario and no penalty terms are
needed.  Starting points come from a scrambled Halton sequence seeded by
``seed``; start ``i`` always uses point ``i``, so results do not depend on
the order in which starts run.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize
from scipy.stats import qmc

from .errors import Infeasible, ParallelInputs
from .linalg import canonical_sign, normalize, plane_normal
from .scenario import CycleScenario, check_cycle_length, cycle_sum, hardy_prob

ETA = np.array([0.0, 0.0, 1.0])
INFEASIBLE_SCORE = -1.0
TIE_TOL = 1e-12
_DEGENERATE = 1e-12


@dataclass(frozen=True, eq=False)
class OptimizationResult:
    best_scenario: CycleScenario
    objective: float
    params: tuple[float, ...]
    starts_run: int
    best_start_index: int
    converged: bool
    objective_history: tuple[float, ...]


def _spherical(polar: float, azimuth: float) -> np.ndarray:
    sp = math.sin(polar)
    return np.array([sp * math.cos(azimuth), sp * math.sin(azimuth), math.cos(polar)])


def _unit_or_raise(x: np.ndarray, what: str) -> np.ndarray:
    norm = np.linalg.norm(x)
    if norm <= _DEGENERATE:
        raise Infeasible(f"{what} degenerates (norm {norm:.3e})")
    return x / norm


def _project_off(w: np.ndarray, u: np.ndarray, what: str) -> np.ndarray:
    """Unit vector along ``w`` minus its component on unit ``u``."""
    w = _unit_or_raise(w - np.dot(w, u) * u, what)
    # second pass restores orthogonality lost to cancellation when w is nearly along u
    return _unit_or_raise(w - np.dot(w, u) * u, what)


def _complete_pair(even: np.ndarray) -> np.ndarray:
    # Odd partner: the state projected off ``even``, so the state lies in their span.
    return _project_off(ETA, even, "state projected off even vector")


def _closing_normal(v2: np.ndarray, vn: np.ndarray) -> np.ndarray:
    try:
        return plane_normal(v2, vn)
    except ParallelInputs as exc:
        raise Infeasible("v2 and v_n are parallel; v1 is undefined") from exc


def parametrize(n: int, params: Sequence[float]) -> CycleScenario:
    """Build an n-box scenario that meets every Hardy condition by construction.

    ``params[0:2]`` are the polar and azimuthal angles of v2.  For
    ``m = 2..(n-1)/2``, ``params[m]`` rotates v_{2m} around v_{2m-1},
    starting from v_{2m-2}.  Every odd partner v_{2m+1} is the state
    (0, 0, 1) projected off v_{2m}, and v1 is the normal of v2 and v_n.
    """
    n = check_cycle_length(n)
    params = [float(p) for p in params]
    if len(params) != (n + 1) // 2:
        raise ValueError(f"n={n} needs {(n + 1) // 2} parameters, got {len(params)}")
    vecs = np.zeros((n + 1, 3))
    vecs[2] = _spherical(params[0], params[1])
    vecs[3] = _complete_pair(vecs[2])
    for m in range(2, (n - 1) // 2 + 1):
        prev_even, odd = vecs[2 * m - 2], vecs[2 * m - 1]
        axis = np.cross(prev_even, odd)
        t = params[m]
        vecs[2 * m] = math.cos(t) * prev_even + math.sin(t) * axis
        vecs[2 * m + 1] = _complete_pair(vecs[2 * m])
    vecs[1] = _closing_normal(vecs[2], vecs[n])
    return CycleScenario(ETA, vecs[1:], label=f"parametrized-n{n}")


def hardy_params_from_scenario(s: CycleScenario) -> list[float]:
    """Inverse of ``parametrize`` up to vector signs.

    The scenario is first rotated so its state becomes (0, 0, 1).  Used to map
    known constructions into the search space.
    """
    state = np.asarray(s.state)
    helper = np.array([1.0, 0.0, 0.0]) if abs(state[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = normalize(helper - np.dot(helper, state) * state)
    e2 = np.cross(state, e1)
    rot = np.array([e1, e2, state])
    vecs = [None] + [rot @ v for v in s.vectors]
    v2 = vecs[2]
    params = [math.acos(max(-1.0, min(1.0, v2[2]))), math.atan2(v2[1], v2[0])]
    prev_even, odd = v2, _complete_pair(v2)
    for m in range(2, (s.n - 1) // 2 + 1):
        even = vecs[2 * m]
        axis = np.cross(prev_even, odd)
        params.append(math.atan2(np.dot(even, axis), np.dot(even, prev_even)))
        prev_even, odd = even, _complete_pair(even)
    return params


def _hardy_score(params: np.ndarray, n: int) -> float:
    try:
        return hardy_prob(parametrize(n, params))
    except Infeasible:
        return INFEASIBLE_SCORE


def cycle_parametrize(n: int, params: Sequence[float]) -> CycleScenario:
    """Scenario with cyclic orthogonality only (no Hardy conditions).

    ``params[0]`` is the polar angle of v2 (azimuth fixed at 0).  For
    ``i = 3..n``, ``params[2i-5:2i-3]`` give a spherical direction that is
    projected off v_{i-1} to form v_i.  v1 closes the cycle as the normal of
    v2 and v_n, so the pair (n, 1) is exact.
    """
    n = check_cycle_length(n)
    if len(params) != 2 * n - 3:
        raise ValueError(f"n={n} needs {2 * n - 3} parameters, got {len(params)}")
    vecs = np.zeros((n + 1, 3))
    vecs[2] = _spherical(params[0], 0.0)
    for i in range(3, n + 1):
        w = _spherical(params[2 * i - 5], params[2 * i - 4])
        vecs[i] = _project_off(w, vecs[i - 1], f"v{i}")
    vecs[1] = _closing_normal(vecs[2], vecs[n])
    return CycleScenario(ETA, vecs[1:], label=f"cycle-n{n}")


def _cycle_score(params: np.ndarray, n: int) -> float:
    try:
        return cycle_sum(cycle_parametrize(n, params))
    except Infeasible:
        return INFEASIBLE_SCORE


def _local_max(x0: np.ndarray, score: Callable[[np.ndarray], float], tol: float):
    res = minimize(
        lambda x: -score(x),
        x0,
        method="Nelder-Mead",
        options={
            "xatol": tol,
            "fatol": 1e-15,
            "maxfev": 4000 * len(x0),
            "adaptive": len(x0) > 4,
        },
    )
    return tuple(float(v) for v in res.x), -float(res.fun), bool(res.success)


def _start_points(dim: int, starts: int, seed: int) -> np.ndarray:
    halton = qmc.Halton(d=dim, scramble=True, seed=np.random.default_rng([seed, dim]))
    return halton.random(starts) * math.pi


def _multistart(
    score: Callable[[np.ndarray], float],
    dim: int,
    starts: int,
    seed: int,
    tol: float,
    workers: int,
) -> tuple[int, list[tuple[tuple[float, ...], float, bool]]]:
    if starts < 1:
        raise ValueError("starts must be >= 1")
    points = list(_start_points(dim, starts, seed))
    run = partial(_local_max, score=score, tol=tol)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run, points))
    else:
        outcomes = [run(x) for x in points]
    best = 0
    for i, (_, value, _) in enumerate(outcomes):
        if value > outcomes[best][1] + TIE_TOL:
            best = i
    return best, outcomes


def optimize_hardy_max(
    n: int, starts: int = 64, seed: int = 0, tol: float = 1e-9, workers: int = 1
) -> OptimizationResult:
    """Maximize P(0,1|n,1) over scenarios that satisfy all Hardy conditions.

    The azimuth of v2 is a pure rotation about the state and is pinned to 0,
    leaving (n-1)/2 free angles.
    """
    n = check_cycle_length(n)
    score = partial(_gauged_hardy_score, n=n)
    best, outcomes = _multistart(score, (n - 1) // 2, starts, seed, tol, workers)
    x, value, ok = outcomes[best]
    params = _with_gauge(x)
    return OptimizationResult(
        best_scenario=_relabel(parametrize(n, params), f"hardy-max-n{n}"),
        objective=value,
        params=params,
        starts_run=starts,
        best_start_index=best,
        converged=ok,
        objective_history=tuple(o[1] for o in outcomes),
    )


def _with_gauge(x: Sequence[float]) -> tuple[float, ...]:
    return (x[0], 0.0, *x[1:])


def _gauged_hardy_score(x: np.ndarray, n: int) -> float:
    return _hardy_score(np.asarray(_with_gauge(x)), n)


def optimize_cycle_max(
    n: int, starts: int = 16, seed: int = 0, tol: float = 1e-9, workers: int = 1
) -> OptimizationResult:
    """Maximize the cycle sum over scenarios with cyclic orthogonality only."""
    n = check_cycle_length(n)
    score = partial(_cycle_score, n=n)
    best, outcomes = _multistart(score, 2 * n - 3, starts, seed, tol, workers)
    x, value, ok = outcomes[best]
    return OptimizationResult(
        best_scenario=_relabel(cycle_parametrize(n, x), f"cycle-max-n{n}"),
        objective=value,
        params=x,
        starts_run=starts,
        best_start_index=best,
        converged=ok,
        objective_history=tuple(o[1] for o in outcomes),
    )


def _relabel(s: CycleScenario, label: str) -> CycleScenario:
    vecs = np.array([canonical_sign(v) for v in s.vectors])
    return CycleScenario(s.state, vecs, s.tolerance, label)
