import itertools

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from stargray.flip_graph import (
    CapExceeded, FlipGraph, enumerate_vertices, first_vertex, flip, flip_graph, flip_position,
    format_vertex, inversion_parity, is_vertex, parse_vertex, restrict, star_neighbors,
)
from stargray.partition_core import as_partition, num_vertices, partitions_of

SMALL = [a for n in range(2, 7) for a in partitions_of(n) if a.k >= 2]


def brute_graph(a):
    """Independent adjacency: two strings differ by a first-entry swap."""
    word = [s for s, p in enumerate(a.parts, 1) for _ in range(p)]
    vs = sorted(set(itertools.permutations(word)))
    g = nx.Graph()
    g.add_nodes_from(vs)
    for x in vs:
        for i in range(1, len(x)):
            if x[i] != x[0]:
                y = list(x)
                y[0], y[i] = y[i], y[0]
                g.add_edge(x, tuple(y))
    return g


@pytest.mark.parametrize("a", SMALL, ids=str)
def test_graph_matches_brute_force(a):
    fg = FlipGraph(a)
    g = brute_graph(a)
    assert fg.size == g.number_of_nodes() == num_vertices(a)
    assert [fg.vertex(i) for i in range(fg.size)] == sorted(g.nodes)
    mine = {frozenset((fg.vertex(u), fg.vertex(v))) for u, v in fg.edges()}
    assert mine == {frozenset(e) for e in g.edges}


def test_degree_is_n_minus_count_of_first_symbol():
    fg = FlipGraph((3, 2, 1))
    for i in range(fg.size):
        x = fg.vertex(i)
        assert len(fg.neighbors(i)) == len(x) - x.count(x[0])


def test_csr_agrees_with_table():
    fg = FlipGraph((2, 2, 1))
    indptr, indices, pos = fg.csr()
    for v in range(fg.size):
        nb = indices[indptr[v]:indptr[v + 1]]
        assert sorted(nb.tolist()) == sorted(fg.neighbors(v))
        for w, p in zip(nb, pos[indptr[v]:indptr[v + 1]]):
            assert flip(fg.vertex(v), int(p)) == fg.vertex(int(w))


def test_enumeration_is_lexicographic():
    vs = list(enumerate_vertices((2, 1, 1)))
    assert vs == sorted(vs) and len(vs) == 12
    assert vs[0] == first_vertex((2, 1, 1)) == (1, 1, 2, 3)


def test_cap():
    with pytest.raises(CapExceeded):
        flip_graph((2, 2, 2), cap=10)
    with pytest.raises(CapExceeded):
        list(enumerate_vertices((2, 2, 2), cap=10))


def test_flip_rules():
    assert flip((1, 2, 3), 3) == (3, 2, 1)
    with pytest.raises(ValueError):
        flip((1, 1, 2), 2)
    with pytest.raises(ValueError):
        flip((1, 2), 1)
    assert flip_position((1, 2, 3), (3, 2, 1)) == 3
    assert flip_position((1, 2, 3), (2, 3, 1)) == 0


@settings(max_examples=60)
@given(st.permutations([1, 1, 2, 2, 3, 4]))
def test_star_neighbors_are_flips(x):
    x = tuple(x)
    nbrs = star_neighbors(x)
    assert len(nbrs) == len(x) - x.count(x[0])
    for y in nbrs:
        p = flip_position(x, y)
        assert p and flip(y, p) == x


@given(st.permutations([1, 2, 3, 4, 5]))
def test_flips_change_parity(x):
    for y in star_neighbors(tuple(x)):
        assert inversion_parity(y) != inversion_parity(x)


def test_vertex_text():
    assert parse_vertex("1123") == (1, 1, 2, 3)
    assert parse_vertex("10,2,1") == (10, 2, 1)
    assert format_vertex((10, 2, 1)) == "10,2,1"
    with pytest.raises(ValueError):
        parse_vertex("1a2")
    assert is_vertex((2, 1), (1, 2, 1)) and not is_vertex((2, 1), (1, 2, 2))


@pytest.mark.parametrize("a,i,c", [((3, 2, 1), 2, 1), ((3, 2, 1), 4, 3), ((2, 2, 2), 3, 2), ((4, 1, 1), 6, 1)])
def test_view_is_an_isomorphism(a, i, c):
    a = as_partition(a)
    view = restrict(a, i, c)
    base = set(map(tuple, FlipGraph(a).vertices.tolist()))
    members = [x for x in base if x[i - 1] == c]
    assert sorted(view.vertices()) == sorted(members)
    for x in members:
        y = view.reduce(x)
        assert view.lift(y) == x
        assert is_vertex(view.reduced, y)
        for p in range(2, len(y) + 1):
            if y[p - 1] != y[0]:
                assert flip(x, view.lift_flip(p)) == view.lift(flip(y, p))
    rows = np.array([view.reduce(x) for x in members], dtype=np.int8)
    assert [tuple(r) for r in view.lift_rows(rows).tolist()] == members


def test_nested_views():
    v = restrict((2, 2, 2), 2, 1).restrict(3, 3)
    assert v.fixed == ((2, 1), (3, 3))
    assert v.reduced.parts == (2, 1, 1)
    with pytest.raises(ValueError):
        v.restrict(2, 2)
    with pytest.raises(ValueError):
        restrict((2, 1), 1, 1)


def test_dot_export():
    dot = FlipGraph((1, 1, 1)).to_dot()
    assert dot.startswith('graph "G(1,1,1)"') and dot.count("--") == 6
    with pytest.raises(CapExceeded):
        FlipGraph((2, 2, 2)).to_dot(max_vertices=50)
