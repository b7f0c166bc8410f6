"""Noncontextual and quantum bounds for odd-cycle scenarios.

The noncontextual quantities are computed by exhaustive enumeration over
all ``2**n`` deterministic outcome assignments.  Assignments are encoded as
the bits of an integer (bit ``i-1`` is the outcome of box ``i``) and
processed in fixed-size blocks so memory stays flat for large ``n``.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import TooLarge
from .scenario import check_cycle_length

MAX_ENUMERATION_N = 25
_BLOCK = 1 << 20


def _check_enumerable(n: int) -> int:
    n = check_cycle_length(n)
    if n > MAX_ENUMERATION_N:
        raise TooLarge(
            f"exhaustive enumeration over 2**{n} assignments is disabled above "
            f"n={MAX_ENUMERATION_N}; use nchv_cycle_bound_closed_form"
        )
    return n


def _assignment_blocks(n: int):
    """Yield boolean arrays of shape (block, n); column i is box i+1's outcome."""
    shifts = np.arange(n, dtype=np.int64)
    total = 1 << n
    for start in range(0, total, _BLOCK):
        codes = np.arange(start, min(start + _BLOCK, total), dtype=np.int64)
        yield ((codes[:, None] >> shifts) & 1).astype(bool)


def nchv_cycle_bound(n: int) -> int:
    """Maximum over all assignments of the number of cyclic pairs with outcome (0, 1)."""
    n = _check_enumerable(n)
    best = 0
    for bits in _assignment_blocks(n):
        hits = (~bits & np.roll(bits, -1, axis=1)).sum(axis=1)
        best = max(best, int(hits.max()))
    return best


def nchv_cycle_bound_closed_form(n: int) -> int:
    return (check_cycle_length(n) - 1) // 2


def nchv_implication_check(n: int) -> bool:
    """True iff every assignment satisfying the Hardy conditions has P(0,1|n,1) = 0.

    Condition ``j`` forbids (1, 1) on boxes (2j-1, 2j) and (0, 0) on boxes
    (2j, 2j+1).
    """
    n = _check_enumerable(n)
    for bits in _assignment_blocks(n):
        ok = np.ones(len(bits), dtype=bool)
        for j in range(1, (n - 1) // 2 + 1):
            a, b, c = bits[:, 2 * j - 2], bits[:, 2 * j - 1], bits[:, 2 * j]
            ok &= ~(a & b) & (b | c)
        if np.any(ok & ~bits[:, n - 1] & bits[:, 0]):
            return False
    return True


def quantum_cycle_bound(n: int) -> float:
    n = check_cycle_length(n)
    c = math.cos(math.pi / n)
    return n * c / (1.0 + c)


def hardy_max_bound(n: int) -> float:
    """Slack left for P(0,1|n,1) once the (n-1)/2 conditions each contribute 1."""
    return quantum_cycle_bound(n) - (check_cycle_length(n) - 1) / 2
