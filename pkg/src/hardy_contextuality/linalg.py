"""Real three-dimensional vector algebra and Born-rule probabilities.

Vectors are plain read-only ``numpy`` arrays of shape ``(3,)``.  Every
function here is pure.
"""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike

from .errors import (
    DegenerateVector,
    IncompatiblePair,
    ParallelInputs,
    ProbabilityOutOfRange,
)

NORM_TOL = 1e-12
ORTHO_TOL = 1e-10
PROB_SLACK = 1e-12


def _frozen(x: np.ndarray) -> np.ndarray:
    x = np.array(x, dtype=float)
    x.flags.writeable = False
    return x


def as_vector(raw: ArrayLike) -> np.ndarray:
    """Return ``raw`` as a read-only float array, checking shape and unit norm."""
    v = np.asarray(raw, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"expected 3 components, got shape {v.shape}")
    if abs(np.linalg.norm(v) - 1.0) > NORM_TOL:
        raise DegenerateVector(f"vector {v} is not unit-normalized (norm {np.linalg.norm(v)!r})")
    return _frozen(v)


def normalize(raw: ArrayLike) -> np.ndarray:
    v = np.asarray(raw, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"expected 3 components, got shape {v.shape}")
    norm = np.linalg.norm(v)
    if norm <= NORM_TOL:
        raise DegenerateVector(f"cannot normalize vector of norm {norm:.3e}")
    return _frozen(v / norm)


def inner(u: ArrayLike, v: ArrayLike) -> float:
    return float(np.dot(u, v))


def clamp_probability(p: float) -> float:
    """Clamp ``p`` into [0, 1], raising if it falls outside by more than the slack."""
    if p < -PROB_SLACK or p > 1.0 + PROB_SLACK:
        raise ProbabilityOutOfRange(f"probability {p!r} outside [0, 1]")
    return min(1.0, max(0.0, float(p)))


def single_prob(state: ArrayLike, v: ArrayLike) -> float:
    """Probability of outcome 1 when measuring the projector onto ``v``."""
    return clamp_probability(inner(state, v) ** 2)


def joint_prob(
    state: ArrayLike,
    vi: ArrayLike,
    vj: ArrayLike,
    a: int,
    b: int,
    tol: float = ORTHO_TOL,
) -> float:
    """Joint probability P(a, b) of measuring the projectors onto ``vi`` and ``vj``.

    The two projectors must be orthogonal (hence compatible).  For orthogonal
    rank-1 projectors outcome (1, 1) is impossible, so the distribution is
    fixed by the two single-outcome probabilities.
    """
    if a not in (0, 1) or b not in (0, 1):
        raise ValueError(f"outcomes must be bits, got ({a}, {b})")
    overlap = inner(vi, vj)
    if abs(overlap) >= tol:
        raise IncompatiblePair(f"projectors are not orthogonal: <vi|vj> = {overlap:.3e}")
    p10 = single_prob(state, vi)
    p01 = single_prob(state, vj)
    if (a, b) == (1, 1):
        return 0.0
    if (a, b) == (1, 0):
        return p10
    if (a, b) == (0, 1):
        return p01
    return clamp_probability(1.0 - p10 - p01)


def joint_distribution(
    state: ArrayLike, vi: ArrayLike, vj: ArrayLike, tol: float = ORTHO_TOL
) -> dict[tuple[int, int], float]:
    return {(a, b): joint_prob(state, vi, vj, a, b, tol) for a in (0, 1) for b in (0, 1)}


def canonical_sign(v: np.ndarray, eps: float = 1e-12) -> np.ndarray:
    """Flip ``v`` so that its first component with magnitude above ``eps`` is positive."""
    for c in v:
        if abs(c) > eps:
            return v if c > 0 else -v
    return v


def plane_normal(u: ArrayLike, v: ArrayLike) -> np.ndarray:
    """Unit normal to the plane spanned by ``u`` and ``v``, sign-canonicalized."""
    if abs(inner(u, v)) >= 1.0 - 1e-10:
        raise ParallelInputs("inputs are (anti)parallel; normal is undefined")
    n = np.cross(u, v)
    norm = np.linalg.norm(n)
    if norm <= NORM_TOL:
        raise ParallelInputs("inputs are (anti)parallel; normal is undefined")
    return _frozen(canonical_sign(n / norm))
