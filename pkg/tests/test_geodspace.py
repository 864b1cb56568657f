from random import Random

import pytest
from hypothesis import given, strategies as st

from lhyp.errors import ConstructionError, InputError
from lhyp.geodspace import (GeodesicGraph, all_segments, between_set,
                            canonical_segment, delta_relations,
                            inner_triangle, is_geodesic, level_set, min_rips,
                            min_rips_witness, min_thinness,
                            min_thinness_witness, read_gg, tripod_insizes,
                            unit_graph, write_gg)
from lhyp.lspace import min_delta_4pt
from lhyp.ordgroup import LexElem, QLexElem
from lhyp.smallgraphs import connected_graphs, edge_list

from helpers import (L, cycle_space, random_connected_unit_rows,
                     random_tree_rows, space_rank1)
from oracles import floyd

seeds = st.integers(min_value=0, max_value=10 ** 6)


def unit_space(n, edges):
    return space_rank1(floyd(n, [(u, v, 1) for u, v in edges]))


def test_graph_metric_matches_floyd():
    edges = [(0, 1), (1, 2), (2, 3), (3, 0), (1, 4)]
    G = GeodesicGraph(["a", "b", "c", "d", "e"], edges)
    want = floyd(5, [(u, v, 1) for u, v in edges])
    assert [list(r) for r in G.dist] == want


def test_graph_rejects_disconnected_and_loops():
    with pytest.raises(InputError):
        GeodesicGraph(["a", "b", "c"], [(0, 1)])
    with pytest.raises(InputError):
        GeodesicGraph(["a", "b"], [(0, 0)])


@given(seeds, st.integers(min_value=2, max_value=8))
def test_unit_graph_round_trip(seed, n):
    X = space_rank1(random_connected_unit_rows(Random(seed), n))
    G = unit_graph(X)
    Y = G.as_space()
    assert Y.dist == X.dist


def test_unit_graph_needs_unit_connectivity():
    # no pair at distance 1, so there are no edges at all
    X = space_rank1([[0, 2, 2], [2, 0, 2], [2, 2, 0]])
    with pytest.raises(InputError):
        unit_graph(X)


def test_unit_graph_check_catches_shortcuts():
    # unit path a-b-c-d but the table claims d(a,d)=2
    X = space_rank1([[0, 1, 2, 2], [1, 0, 1, 2], [2, 1, 0, 1], [2, 2, 1, 0]])
    with pytest.raises(ConstructionError):
        unit_graph(X, check=True)
    G = unit_graph(X, check=False)
    assert G.dist[0][3] == 3


def test_is_geodesic_verdicts():
    ok, wit = is_geodesic(cycle_space(6))
    assert ok and wit is None
    bad = space_rank1([[0, 2, 2], [2, 0, 2], [2, 2, 0]])
    ok, wit = is_geodesic(bad)
    assert not ok and wit is not None and wit[2] == 1


def test_between_and_level_sets_on_c4():
    X = cycle_space(4)
    assert between_set(X, "v0", "v2") == ("v0", "v1", "v2", "v3")
    assert level_set(X, "v0", "v2", 1) == ("v1", "v3")
    assert level_set(X, "v0", "v2", 0) == ("v0",)


def test_canonical_segment_is_least_and_valid():
    X = cycle_space(4)
    seg = canonical_segment(X, "v0", "v2")
    assert seg == ("v0", "v1", "v2")
    segs = list(all_segments(X, "v0", "v2"))
    assert segs == [("v0", "v1", "v2"), ("v0", "v3", "v2")]
    assert seg == segs[0]


def test_canonical_segment_needs_geodesic_space():
    bad = space_rank1([[0, 2, 2], [2, 0, 2], [2, 2, 0]])
    with pytest.raises(InputError):
        canonical_segment(bad, "v0", "v1")


@given(seeds)
def test_segments_realize_the_distance(seed):
    rng = Random(seed)
    X = space_rank1(random_connected_unit_rows(rng, 7))
    xs = rng.sample(list(X.labels), 2)
    d = X.d(xs[0], xs[1]).coords[0]
    for seg in all_segments(X, xs[0], xs[1]):
        assert len(seg) == d + 1
        assert all(X.d(seg[t], seg[t + 1]) == L(1) for t in range(d))


def test_tripod_insizes_sum_along_sides():
    X = cycle_space(4)
    tp = tripod_insizes(X, "v0", "v1", "v2")
    want = (QLexElem.from_lex(L(1)), QLexElem.zero(1), QLexElem.from_lex(L(1)))
    assert tp.insizes == want
    # the two insizes meeting along side [x,y] sum to d(x,y)
    at_x, at_y, at_z = tp.insizes
    dyz, dxz, dxy = tp.sides
    assert at_x + at_y == dxy and at_x + at_z == dxz and at_y + at_z == dyz
    # half-integer insizes on an odd triangle
    tp5 = tripod_insizes(cycle_space(5), "v0", "v1", "v3")
    assert tp5.insizes[0] == QLexElem(L(1), 2)


def test_c4_thin_and_rips():
    X = cycle_space(4)
    assert min_thinness(X) == QLexElem.from_lex(L(2))
    assert min_rips(X) == QLexElem.from_lex(L(1))
    val, wit = min_thinness_witness(X)
    assert val == min_thinness(X) and "v1" in wit and "v3" in wit
    val, wit = min_rips_witness(X)
    assert val == min_rips(X) and len(wit) == 4


def test_tree_constants_vanish():
    X = space_rank1(random_tree_rows(Random(5), 8, maxw=1))
    rel = delta_relations(X)
    assert rel.delta_point.is_zero() and rel.delta_thin.is_zero()
    assert rel.delta_rips.is_zero() and rel.ok


def test_inner_triangle_degenerate_collapses():
    # v1 lies on [v0,v2], so all three side points coincide
    t = inner_triangle(cycle_space(4), "v0", "v1", "v2")
    assert t.vertices == ("v1", "v1", "v1") and t.diameter == L(0)


def test_inner_triangle_on_c6():
    X = cycle_space(6)
    t = inner_triangle(X, "v0", "v2", "v4")
    assert t.vertices == ("v1", "v5", "v3") and t.diameter == L(2)
    # fits the 4 delta budget at delta=1 but not at 0
    inner_triangle(X, "v0", "v2", "v4", delta=L(1))
    with pytest.raises(ConstructionError):
        inner_triangle(X, "v0", "v2", "v4", delta=QLexElem.zero(1))


def test_delta_relations_small_graph_sweep():
    # every connected unit graph on up to 5 vertices obeys all six bounds
    for n in range(1, 6):
        for adj in connected_graphs(n):
            X = unit_space(n, edge_list(adj))
            rel = delta_relations(X)
            assert rel.ok, (n, adj, rel.failures)


@given(seeds)
def test_relations_on_random_unit_graphs(seed):
    X = space_rank1(random_connected_unit_rows(Random(seed), 7))
    rel = delta_relations(X)
    assert rel.ok
    assert rel.delta_point <= min_delta_4pt(X) * 2


def test_gg_round_trip_preserves_structure():
    # the format carries indices only, labels do not survive
    G = GeodesicGraph(["a", "b", "c"], [(0, 1), (1, 2)])
    H = read_gg(write_gg(G))
    assert H.labels == ("0", "1", "2")
    assert [list(r) for r in H.dist] == [list(r) for r in G.dist]
    with pytest.raises(InputError):
        read_gg("graph2\n0 1\n")
    with pytest.raises(InputError):
        read_gg("graph 3\n0 1\n1 2\n2\n")
