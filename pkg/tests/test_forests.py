import itertools

import pytest
from hypothesis import given, settings, strategies as st

from msrtools.forests import (
    LinearForestDecomposition,
    decompose_linear_forests,
    forest_paths,
    linear_arboricity_bounds,
)
from msrtools.generators import random_graph
from msrtools.model import InputError
from msrtools.sources import Graph

from golden import GRAPH, GRAPH_FORESTS


def _assert_valid(graph, dec, limit):
    assert len(dec.forests) <= limit
    union = set()
    for f, paths in zip(dec.forests, dec.paths):
        assert not union & f
        union |= f
        # every forest splits into vertex-disjoint paths covering its edges
        path_edges = {tuple(sorted(e)) for p in paths for e in zip(p, p[1:])}
        assert path_edges == set(f)
        seen = [v for p in paths for v in p]
        assert len(seen) == len(set(seen))
        for p in paths:
            assert p[0] < p[-1]
        assert [min(p) for p in paths] == sorted(min(p) for p in paths)
    assert union == set(graph.edges)


def test_caption_forests_accepted_with_canonical_paths():
    dec = LinearForestDecomposition.from_edge_sets(GRAPH, GRAPH_FORESTS)
    assert dec.paths == (((1, 2, 3, 4, 5, 6),), ((1, 7, 8, 3), (4, 9, 6)))
    assert dec.uncovered(GRAPH, 0) == (7, 8, 9)
    assert dec.uncovered(GRAPH, 1) == (2, 5)


def test_search_decomposes_the_nine_vertex_graph():
    dec = decompose_linear_forests(GRAPH)
    _assert_valid(GRAPH, dec, 2)


def test_single_edge():
    g = Graph(2, ((1, 2),))
    dec = decompose_linear_forests(g)
    assert dec.paths == (((1, 2),),)


def test_complete_graph_on_four_vertices_needs_two_forests():
    k4 = Graph(4, tuple(itertools.combinations(range(1, 5), 2)))
    dec = decompose_linear_forests(k4)
    _assert_valid(k4, dec, 2)
    assert sum(1 for f in dec.forests if f) == 2


def test_path_orientation_starts_at_smaller_endpoint():
    assert forest_paths([(5, 3), (3, 4)]) == ((4, 3, 5),)
    assert forest_paths([(9, 8), (1, 2)]) == ((1, 2), (8, 9))


def test_cycle_and_branch_rejected():
    with pytest.raises(InputError):
        forest_paths([(1, 2), (2, 3), (3, 1)])
    with pytest.raises(InputError):
        forest_paths([(1, 2), (1, 3), (1, 4)])


def test_bad_edge_sets_rejected():
    with pytest.raises(InputError):
        LinearForestDecomposition.from_edge_sets(GRAPH, [GRAPH_FORESTS[0]])
    with pytest.raises(InputError):
        LinearForestDecomposition.from_edge_sets(GRAPH, [GRAPH_FORESTS[0], GRAPH_FORESTS[0] + GRAPH_FORESTS[1]])


@pytest.mark.parametrize("degree,expected", [(1, (1, 2)), (3, (2, 3)), (4, (3, 3))])
def test_arboricity_bounds(degree, expected):
    assert linear_arboricity_bounds(degree) == expected


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 14), st.integers(0, 10**6), st.sampled_from([3, 4]))
def test_random_graphs_meet_the_lower_bound(n, seed, max_degree):
    g = random_graph(n, max_degree, seed=seed)
    dec = decompose_linear_forests(g)
    limit = max(1, linear_arboricity_bounds(g.max_degree)[0])
    _assert_valid(g, dec, limit)
