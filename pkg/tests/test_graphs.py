import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from worpitzky.errors import GuardExceeded
from worpitzky.graphs import (SimpleGraph, all_graphs, edge_root, graph_of_mask, has_interval_ordering,
                              is_interval_ordering, sigma_of, type_a, verify_corollary)
from worpitzky.subsets import context


def test_parse_and_validation():
    G = SimpleGraph.parse("1-2,2-3")
    assert G.n == 3 and str(G) == "1-2,2-3"
    assert SimpleGraph.parse("", 4).edges == frozenset()
    for bad in ("1-1", "1-2,2-1", "1-5"):
        with pytest.raises(ValueError):
            SimpleGraph.parse(bad, 4)
    with pytest.raises(ValueError):
        G.relabel([1, 1, 2])


def test_edge_roots():
    assert edge_root(4, 1, 2) == (1, 0, 0)
    assert edge_root(4, 1, 4) == (1, 1, 1)
    assert edge_root(4, 2, 4) == (0, 1, 1)
    G = SimpleGraph.parse("1-3", 3)
    assert sigma_of(G) == [(1, 1)]
    assert sigma_of(G, [2, 1, 3]) == [(0, 1)]


def test_mask_round_trip():
    n = 4
    ctx = context(type_a(n))
    for G in all_graphs(n):
        assert graph_of_mask(n, ctx.mask(sigma_of(G))) == G


@pytest.mark.parametrize("edges,n,expected", [
    ("1-2,2-3", 3, True),          # path
    ("1-2,2-3,1-3", 3, True),      # triangle
    ("1-3,3-2", 3, True),          # path 1-3-2
    ("1-2,2-3,3-4,1-4", 4, False),  # 4-cycle
    ("1-2,1-3,1-4", 4, True),      # star
    ("", 3, True),
])
def test_interval_examples(edges, n, expected):
    ok, order = has_interval_ordering(SimpleGraph.parse(edges, n))
    assert ok == expected
    if ok:
        assert is_interval_ordering(SimpleGraph.parse(edges, n), order)


def test_path_13_2_natural_labeling_is_not_an_ordering():
    G = SimpleGraph.parse("1-3,3-2", 3)
    assert not is_interval_ordering(G, (1, 2, 3))
    assert is_interval_ordering(G, (1, 3, 2))


def test_ordering_guard():
    with pytest.raises(GuardExceeded):
        has_interval_ordering(SimpleGraph.parse("", 11))


@settings(max_examples=40)
@given(st.integers(0, 2**10 - 1))
def test_interval_ordering_implies_chordal(bits):
    G = graph_of_mask(5, bits)
    ok, _ = has_interval_ordering(G)
    if ok:
        assert nx.is_chordal(G.to_networkx())


@pytest.mark.parametrize("n,graphs,interval", [(3, 8, 8), (4, 64, 61)])
def test_corollary_with_saito_cross_check(n, graphs, interval):
    rep = verify_corollary(n)
    assert rep["ok"] and rep["failures"] == []
    assert (rep["graphs"], rep["interval"]) == (graphs, interval)
    assert rep["saito_k"] == [1]


@pytest.mark.slow
def test_corollary_five_vertices():
    rep = verify_corollary(5)
    assert rep["ok"] and (rep["graphs"], rep["interval"]) == (1024, 822)
