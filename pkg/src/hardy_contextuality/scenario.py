"""Odd-cycle measurement scenarios on a qutrit.

A scenario is a state together with ``n`` measurement directions (boxes
``1..n``) where cyclically adjacent directions are orthogonal, so each pair
``(i, i+1)`` forms a context that can be measured jointly.  Box labels are
1-based everywhere in the public API; ``CycleScenario.vectors`` is a plain
0-based ``(n, 3)`` array.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np
from numpy.typing import ArrayLike

from .errors import InfeasibleAngles, InvalidScenario
from .linalg import (
    ORTHO_TOL,
    as_vector,
    inner,
    joint_prob,
    normalize,
    plane_normal,
)

CONDITION_TOL = 1e-10
LOAD_NORM_WARN = 1e-6


class NormalizationWarning(UserWarning):
    """An input vector in a scenario file was noticeably off unit norm."""


class DegenerateFamilyWarning(UserWarning):
    pass


def check_cycle_length(n: int) -> int:
    if not isinstance(n, (int, np.integer)) or n < 5 or n % 2 == 0:
        raise ValueError(f"cycle length must be an odd integer >= 5, got {n!r}")
    return int(n)


def next_box(i: int, n: int) -> int:
    """Cyclic successor of 1-based box ``i`` (``n + 1`` wraps to 1)."""
    return i % n + 1


@dataclass(frozen=True, eq=False)
class CycleScenario:
    state: np.ndarray
    vectors: np.ndarray
    tolerance: float = ORTHO_TOL
    label: str = "custom"

    def __post_init__(self) -> None:
        vecs = np.array(self.vectors, dtype=float)
        if vecs.ndim != 2 or vecs.shape[1] != 3:
            raise InvalidScenario(f"vectors must have shape (n, 3), got {vecs.shape}")
        check_cycle_length(vecs.shape[0])
        for row in vecs:
            as_vector(row)
        vecs.flags.writeable = False
        object.__setattr__(self, "vectors", vecs)
        object.__setattr__(self, "state", as_vector(self.state))

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    def vector(self, i: int) -> np.ndarray:
        """Measurement direction of 1-based box ``i``."""
        if not 1 <= i <= self.n:
            raise IndexError(f"box {i} out of range 1..{self.n}")
        return self.vectors[i - 1]

    def contexts(self) -> list[tuple[int, int]]:
        return [(i, next_box(i, self.n)) for i in range(1, self.n + 1)]

    def prob(self, i: int, j: int, a: int, b: int) -> float:
        """P(a, b | i, j) for a compatible pair of 1-based boxes."""
        return joint_prob(self.state, self.vector(i), self.vector(j), a, b, self.tolerance)

    def with_vector(self, i: int, raw: ArrayLike) -> CycleScenario:
        vecs = np.array(self.vectors)
        vecs[i - 1] = normalize(raw)
        return CycleScenario(self.state, vecs, self.tolerance, self.label)


@dataclass(frozen=True)
class Violation:
    kind: str  # "norm" or "orthogonality"
    boxes: tuple[int, ...]
    residual: float

    def __str__(self) -> str:
        where = ",".join(map(str, self.boxes))
        return f"{self.kind} violated at ({where}): residual {self.residual:.3e}"


@dataclass(frozen=True)
class ConditionReport:
    condition_sums: tuple[float, ...]
    hardy_prob: float
    cycle_sum: float
    all_satisfied: bool


@dataclass(frozen=True)
class HardyFamilyParams:
    k: int
    phis: tuple[float, ...]
    thetas: tuple[float, ...]
    deltas: tuple[float, ...] = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "deltas", tuple(b - a for a, b in zip(self.phis, self.phis[1:]))
        )

    @property
    def n(self) -> int:
        return 4 * self.k + 1


def validate_scenario(s: CycleScenario) -> list[Violation]:
    out = []
    for i, v in enumerate([s.state, *s.vectors]):
        r = abs(np.linalg.norm(v) - 1.0)
        if r > s.tolerance:
            out.append(Violation("norm", (i,), r))
    for i, j in s.contexts():
        r = abs(inner(s.vector(i), s.vector(j)))
        if r >= s.tolerance:
            out.append(Violation("orthogonality", (i, j), r))
    return out


def check_conditions(s: CycleScenario) -> ConditionReport:
    """Evaluate the Hardy conditions, the Hardy probability and the cycle sum.

    Condition ``j`` is ``P(0,1|2j-1,2j) + P(0,1|2j,2j+1)`` for
    ``j = 1..(n-1)/2``; each should equal 1.  The Hardy probability is
    ``P(0,1|n,1)``, which vanishes in every noncontextual model obeying the
    conditions.
    """
    violations = validate_scenario(s)
    if violations:
        raise InvalidScenario("; ".join(map(str, violations)))
    n = s.n
    sums = tuple(
        s.prob(2 * j - 1, 2 * j, 0, 1) + s.prob(2 * j, 2 * j + 1, 0, 1)
        for j in range(1, (n - 1) // 2 + 1)
    )
    hardy = s.prob(n, 1, 0, 1)
    ok = all(abs(x - 1.0) <= CONDITION_TOL for x in sums)
    return ConditionReport(sums, hardy, sum(sums) + hardy, ok)


def hardy_prob(s: CycleScenario) -> float:
    return s.prob(s.n, 1, 0, 1)


def cycle_sum(s: CycleScenario) -> float:
    return sum(s.prob(i, j, 0, 1) for i, j in s.contexts())


def pentagon() -> CycleScenario:
    """The five-box qutrit scenario with Hardy probability 1/9."""
    state = normalize([1, 1, 1])
    vectors = [
        normalize([1, -1, 1]),
        normalize([1, 1, 0]),
        normalize([0, 0, 1]),
        normalize([1, 0, 0]),
        normalize([0, 1, 1]),
    ]
    return CycleScenario(state, np.array(vectors), label="pentagon")


def ks_block() -> dict[str, np.ndarray]:
    """The eight-vector Kochen-Specker gadget: the pentagon, its state, v6 and v7.

    v6 completes the basis {v2, v3}; v7 completes {v4, v5}.  Both come out
    orthogonal to the state because the state lies in those two planes.
    """
    p = pentagon()
    block = {"eta": p.state}
    block.update({f"v{i}": p.vector(i) for i in range(1, 6)})
    block["v6"] = plane_normal(p.vector(2), p.vector(3))
    block["v7"] = plane_normal(p.vector(4), p.vector(5))
    return block


def solve_thetas(k: int, phis: Sequence[float]) -> list[float]:
    """Solve the closing relation and back-substitute the angle recurrence.

    ``tan(theta_k)**2 = -cos(2 phi_k)`` fixes the last angle, then
    ``tan(theta_j) = tan(theta_{j+1}) * cos(phi_{j+1} - phi_j)`` runs downward.
    A closing value of exactly zero (within 1e-12) is the degenerate
    boundary: all angles vanish and a ``DegenerateFamilyWarning`` is issued.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    phis = [float(p) for p in phis]
    if len(phis) != k:
        raise ValueError(f"expected {k} angles, got {len(phis)}")
    if any(not 0.0 < p < math.pi / 2 for p in phis) or any(
        b <= a for a, b in zip(phis, phis[1:])
    ):
        raise ValueError("phis must be strictly increasing inside (0, pi/2)")
    closing = -math.cos(2.0 * phis[-1])
    if abs(closing) <= 1e-12:
        warnings.warn(
            "closing relation gives tan(theta_k) = 0; family is degenerate",
            DegenerateFamilyWarning,
            stacklevel=2,
        )
        closing = 0.0
    elif closing < 0.0:
        raise InfeasibleAngles(
            f"-cos(2*phi_k) = {closing:.6g} < 0 has no real solution for theta_k"
        )
    tans = [0.0] * k
    tans[-1] = math.sqrt(closing)
    for j in range(k - 2, -1, -1):
        tans[j] = tans[j + 1] * math.cos(phis[j + 1] - phis[j])
    return [math.atan(t) for t in tans]


def hardy_family_params(k: int) -> HardyFamilyParams:
    if k < 2:
        raise ValueError(f"k must be >= 2 (k=1 is degenerate), got {k}")
    phis = [j * math.pi / (2 * (k + 1)) for j in range(1, k + 1)]
    return HardyFamilyParams(k, tuple(phis), tuple(solve_thetas(k, phis)))


def closed_form_hardy_prob(params: HardyFamilyParams) -> float:
    s2 = math.sin(params.thetas[0]) ** 2
    c2 = math.cos(params.thetas[0]) ** 2
    cp2 = math.cos(params.phis[0]) ** 2
    return s2 * cp2 / (c2 + s2 * cp2)


def hardy_family(k: int) -> CycleScenario:
    """The n = 4k+1 family whose Hardy probability tends to 1/2 as k grows.

    The state is (0, 0, 1).  Box pairs (2j, 2j+1) and (4k-2j+2, 4k-2j+3)
    share the azimuth ``phi_j``; each pair spans a plane containing the
    state.  The vector components use the complementary angle
    ``pi/2 - theta_j`` (with ``theta_j`` from ``solve_thetas``), which is
    the assignment under which every cyclic neighbour pair is orthogonal.
    """
    params = hardy_family_params(k)
    n = params.n
    vecs = np.zeros((n, 3))
    th1, ph1 = params.thetas[0], params.phis[0]
    vecs[0] = normalize([0.0, math.cos(th1), -math.sin(th1) * math.cos(ph1)])
    for j, (theta, phi) in enumerate(zip(params.thetas, params.phis), start=1):
        a = math.pi / 2 - theta
        ca, sa, cp, sp = math.cos(a), math.sin(a), math.cos(phi), math.sin(phi)
        vecs[2 * j - 1] = (-ca * sp, ca * cp, sa)
        vecs[2 * j] = (sa * sp, -sa * cp, ca)
        vecs[4 * k - 2 * j + 1] = (-sa * sp, -sa * cp, ca)
        vecs[4 * k - 2 * j + 2] = (ca * sp, ca * cp, sa)
    return CycleScenario(np.array([0.0, 0.0, 1.0]), vecs, label=f"hardy-family-k{k}")


def scenario_from_dict(doc: dict[str, Any]) -> CycleScenario:
    """Build a scenario from a decoded scenario document.

    Vectors are normalized on load; a ``NormalizationWarning`` is issued when
    any input norm differs from 1 by more than 1e-6.  Unknown keys are ignored.
    """
    try:
        n = int(doc["n"])
        raw_state = np.asarray(doc["state"], dtype=float)
        raw_vecs = np.asarray(doc["vectors"], dtype=float)
        tol = float(doc.get("tolerance", ORTHO_TOL))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidScenario(f"malformed scenario document: {exc}") from exc
    check_cycle_length(n)
    if raw_vecs.shape != (n, 3) or raw_state.shape != (3,):
        raise InvalidScenario(
            f"expected state of length 3 and {n} vectors of length 3, "
            f"got {raw_state.shape} and {raw_vecs.shape}"
        )
    off = [
        (name, float(np.linalg.norm(v)))
        for name, v in [("state", raw_state)] + [(f"v{i + 1}", v) for i, v in enumerate(raw_vecs)]
        if abs(np.linalg.norm(v) - 1.0) > LOAD_NORM_WARN
    ]
    if off:
        listed = ", ".join(f"{name} (norm {nv:.6g})" for name, nv in off)
        warnings.warn(f"normalized non-unit input vectors: {listed}", NormalizationWarning, stacklevel=2)
    return CycleScenario(
        normalize(raw_state),
        np.array([normalize(v) for v in raw_vecs]),
        tol,
        str(doc.get("label", "custom")),
    )


def scenario_to_dict(s: CycleScenario) -> dict[str, Any]:
    return {
        "n": s.n,
        "label": s.label,
        "state": [float(x) for x in s.state],
        "vectors": [[float(x) for x in v] for v in s.vectors],
        "tolerance": s.tolerance,
    }


def load_scenario(path: str | Path) -> CycleScenario:
    with open(path) as fh:
        return scenario_from_dict(json.load(fh))


def save_scenario(s: CycleScenario, path: str | Path) -> None:
    Path(path).write_text(json.dumps(scenario_to_dict(s), indent=2) + "\n")
