"""Orthogonality graphs of labeled vector sets, with DOT and JSON export."""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping

import numpy as np

from .errors import UnsupportedFormat
from .linalg import inner
from .scenario import CycleScenario

EDGE_TOL = 1e-8
BORDERLINE_MAX = 1e-6


class BorderlineOrthogonalityWarning(UserWarning):
    pass


@dataclass(frozen=True, eq=False)
class OrthogonalityGraph:
    vertices: tuple[tuple[str, np.ndarray], ...]
    edges: frozenset[frozenset[str]]
    tolerance: float = EDGE_TOL

    @property
    def labels(self) -> list[str]:
        return [label for label, _ in self.vertices]

    def sorted_edges(self) -> list[tuple[str, str]]:
        return sorted(tuple(sorted(e)) for e in self.edges)

    def has_edge(self, a: str, b: str) -> bool:
        return frozenset((a, b)) in self.edges


def build_graph(
    vectors: Mapping[str, np.ndarray] | Iterable[tuple[str, np.ndarray]],
    tolerance: float = EDGE_TOL,
) -> OrthogonalityGraph:
    """Connect every pair of vectors whose inner product is below ``tolerance``.

    Pairs whose overlap lies between ``tolerance`` and 1e-6 are not joined
    but reported through ``BorderlineOrthogonalityWarning``.
    """
    if not 0 < tolerance < 0.1:
        raise ValueError(f"tolerance must lie in (0, 0.1), got {tolerance}")
    items = list(vectors.items() if isinstance(vectors, Mapping) else vectors)
    labels = [label for label, _ in items]
    if len(set(labels)) != len(labels):
        raise ValueError("vertex labels must be unique")
    edges = set()
    borderline = []
    for (a, u), (b, v) in combinations(items, 2):
        overlap = abs(inner(u, v))
        if overlap < tolerance:
            edges.add(frozenset((a, b)))
        elif overlap <= BORDERLINE_MAX:
            borderline.append(f"{a}-{b}: {overlap:.3e}")
    if borderline:
        warnings.warn(
            "near-orthogonal pairs left unconnected: " + ", ".join(borderline),
            BorderlineOrthogonalityWarning,
            stacklevel=2,
        )
    vertices = tuple((label, np.asarray(v, dtype=float)) for label, v in items)
    return OrthogonalityGraph(vertices, frozenset(edges), tolerance)


def scenario_vectors(s: CycleScenario, include_state: bool = False) -> list[tuple[str, np.ndarray]]:
    items = [(f"v{i}", s.vector(i)) for i in range(1, s.n + 1)]
    return [("eta", s.state), *items] if include_state else items


def cycle_edges(labels: list[str]) -> frozenset[frozenset[str]]:
    n = len(labels)
    return frozenset(frozenset((labels[i], labels[(i + 1) % n])) for i in range(n))


def is_cycle(g: OrthogonalityGraph, n: int) -> bool:
    """True iff ``g`` is exactly the n-cycle through its vertices in label order."""
    labels = g.labels
    if n < 3 or len(labels) != n:
        return False
    return g.edges == cycle_edges(labels)


def extra_edges(g: OrthogonalityGraph) -> list[tuple[str, str]]:
    """Edges beyond the cycle through the vertices in order."""
    cyc = cycle_edges(g.labels)
    return sorted(tuple(sorted(e)) for e in g.edges - cyc)


def _quote(label: str) -> str:
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: OrthogonalityGraph, name: str = "orthogonality") -> str:
    lines = [f"graph {name} {{"]
    lines += [f"  {_quote(label)};" for label in g.labels]
    lines += [f"  {_quote(a)} -- {_quote(b)};" for a, b in g.sorted_edges()]
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_dict(g: OrthogonalityGraph) -> dict:
    return {
        "tolerance": g.tolerance,
        "vertices": [
            {"label": label, "vector": [float(f"{x:.12g}") for x in v]} for label, v in g.vertices
        ],
        "edges": [list(e) for e in g.sorted_edges()],
    }


def export_graph(g: OrthogonalityGraph, format: str = "dot") -> str:
    if format == "dot":
        return to_dot(g)
    if format == "json":
        return json.dumps(graph_to_dict(g), indent=2) + "\n"
    raise UnsupportedFormat(f"unsupported graph format {format!r}; use 'dot' or 'json'")
