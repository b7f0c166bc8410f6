import json
import warnings

import numpy as np
import pytest

from hardy_contextuality import (
    UnsupportedFormat,
    build_graph,
    export_graph,
    hardy_family,
    is_cycle,
    ks_block,
    normalize,
    pentagon,
)
from hardy_contextuality.graph import (
    BorderlineOrthogonalityWarning,
    OrthogonalityGraph,
    extra_edges,
    scenario_vectors,
)

KS_EDGES = {
    ("v1", "v2"), ("v2", "v3"), ("v3", "v4"), ("v4", "v5"), ("v1", "v5"),
    ("eta", "v6"), ("eta", "v7"), ("v2", "v6"), ("v3", "v6"), ("v4", "v7"), ("v5", "v7"),
}


def brute_edges(items, tol):
    return {
        tuple(sorted((a, b)))
        for ia, (a, u) in enumerate(items)
        for b, v in items[ia + 1:]
        if abs(sum(x * y for x, y in zip(u, v))) < tol
    }


def test_pentagon_is_c5():
    g = build_graph(scenario_vectors(pentagon()))
    assert is_cycle(g, 5)
    assert g.sorted_edges() == sorted(brute_edges(scenario_vectors(pentagon()), 1e-8))


def test_ks_block_graph():
    block = ks_block()
    g = build_graph(block)
    assert set(g.sorted_edges()) == KS_EDGES == brute_edges(list(block.items()), 1e-8)
    assert len(g.edges) == 11
    assert not is_cycle(g, 8)
    labels = list(block)
    for i, a in enumerate(labels):
        for b in labels[i + 1:]:
            if not g.has_edge(a, b):
                assert abs(block[a] @ block[b]) > 0.1


def test_empty_graph_is_not_cycle():
    g = OrthogonalityGraph((), frozenset())
    assert not is_cycle(g, 0)
    assert not is_cycle(g, 5)


@pytest.mark.parametrize("k", range(2, 21))
def test_family_graph_contains_cycle(k):
    s = hardy_family(k)
    g = build_graph(scenario_vectors(s))
    labels = g.labels
    for i in range(s.n):
        assert g.has_edge(labels[i], labels[(i + 1) % s.n])
    # Extra orthogonalities are recorded, not assumed absent.
    assert set(extra_edges(g)) == set(g.sorted_edges()) - {
        tuple(sorted((labels[i], labels[(i + 1) % s.n]))) for i in range(s.n)
    }


def test_family_k2_is_c9():
    assert is_cycle(build_graph(scenario_vectors(hardy_family(2))), 9)


def test_permutation_relabels_edges():
    items = list(ks_block().items())
    perm = np.random.default_rng(0).permutation(len(items))
    g1 = build_graph(items)
    g2 = build_graph([items[i] for i in perm])
    assert g1.edges == g2.edges
    assert g2.labels == [items[i][0] for i in perm]


def test_borderline_warning():
    u = np.array([1.0, 0.0, 0.0])
    v = normalize([1e-7, 1.0, 0.0])
    with pytest.warns(BorderlineOrthogonalityWarning, match="a-b"):
        g = build_graph([("a", u), ("b", v)])
    assert not g.edges
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        build_graph([("a", u), ("c", [0.0, 1.0, 0.0])])


def test_dot_export_ks_block():
    dot = export_graph(build_graph(ks_block()), "dot")
    lines = dot.strip().splitlines()
    assert lines[0] == "graph orthogonality {" and lines[-1] == "}"
    nodes = [l for l in lines[1:-1] if "--" not in l]
    edges = [l for l in lines[1:-1] if "--" in l]
    assert len(nodes) == 8 and len(edges) == 11
    assert edges == sorted(edges)
    assert '  "eta" -- "v6";' in edges


def test_dot_export_c5_and_stability():
    g = build_graph(scenario_vectors(pentagon()))
    dot = export_graph(g, "dot")
    assert dot.count("--") == 5
    assert dot.count(";") == 10
    assert export_graph(build_graph(scenario_vectors(pentagon())), "dot") == dot


def test_json_export():
    doc = json.loads(export_graph(build_graph(ks_block()), "json"))
    assert [v["label"] for v in doc["vertices"]] == list(ks_block())
    assert len(doc["edges"]) == 11
    assert doc["tolerance"] == 1e-8


def test_unsupported_format():
    with pytest.raises(UnsupportedFormat):
        export_graph(build_graph(ks_block()), "xml")


def test_tolerance_range():
    with pytest.raises(ValueError):
        build_graph(ks_block(), tolerance=0.5)
