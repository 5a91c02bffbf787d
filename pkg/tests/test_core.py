from fractions import Fraction

import pytest

from bdhyper.core import (BOTTOM, DomainError, DimensionError, Graph,
                          Hypergraph, ParseError, build_adjacency,
                          complete_hypergraph, disjoint_union,
                          format_graph, format_hypergraph, gaifman,
                          hyper_distance, induced_subhypergraph,
                          monochromatic_edges, parse_instance, simplify)


def H(n, delta, *edges, multi=False):
    return Hypergraph(3, n, delta, tuple(edges), multi)


def test_adjacency_single_edge():
    rows = build_adjacency(H(3, 2, (1, 2, 3)))
    assert rows == [[(1, 2, 3), BOTTOM]] * 3


def test_adjacency_empty():
    assert build_adjacency(H(4, 2)) == [[BOTTOM, BOTTOM]] * 4


def test_adjacency_follows_edge_order():
    rows = build_adjacency(H(4, 2, (1, 2, 3), (1, 2, 4)))
    assert rows[0] == [(1, 2, 3), (1, 2, 4)]
    assert rows[2] == [(1, 2, 3), BOTTOM]
    assert rows[3] == [(1, 2, 4), BOTTOM]


def test_distance():
    h = H(4, 2, (1, 2, 3), (1, 2, 4))
    assert hyper_distance(h, h) == 0
    assert hyper_distance(H(3, 1, (1, 2, 3)), H(3, 1), 1) == Fraction(1, 3)
    assert hyper_distance(h, H(4, 2, (1, 2, 3), (2, 3, 4)), 2) == Fraction(1, 4)


def test_distance_dimension_mismatch():
    with pytest.raises(DimensionError):
        hyper_distance(H(3, 1), H(4, 1))


def test_gaifman():
    assert gaifman(H(3, 1, (1, 2, 3))).edges == ((1, 2), (1, 3), (2, 3))
    assert gaifman(H(3, 1)).edges == ()
    g = gaifman(H(4, 2, (1, 2, 3), (2, 3, 4)))
    assert g.edges == ((1, 2), (1, 3), (2, 3), (2, 4), (3, 4))


def test_induced():
    h = H(4, 2, (1, 2, 3), (2, 3, 4))
    sub, _ = induced_subhypergraph(h, set())
    assert sub.n == 0 and sub.edges == ()
    sub, _ = induced_subhypergraph(H(3, 1, (1, 2, 3)), {1, 2, 3})
    assert sub.edges == ((1, 2, 3),)
    sub, relabel = induced_subhypergraph(h, {2, 3, 4})
    assert sub.edges == ((1, 2, 3),) and relabel == {2: 1, 3: 2, 4: 3}


def test_simplify():
    assert simplify(H(3, 2, (1, 2, 3), (1, 2, 3), multi=True)).edges == ((1, 2, 3),)
    assert simplify(H(3, 1, multi=True)).edges == ()
    h = H(4, 3, (1, 2, 3), (1, 2, 3), (2, 3, 4), multi=True)
    assert simplify(h).edges == ((1, 2, 3), (2, 3, 4))


@pytest.mark.parametrize("edges", [((1, 2),), ((1, 1, 2),)])
def test_invalid_edge(edges):
    with pytest.raises(ValueError):
        Hypergraph(3, 3, 1, edges)


def test_degree_and_range_checks():
    with pytest.raises(ValueError):
        H(4, 1, (1, 2, 3), (1, 2, 4))
    with pytest.raises(DomainError):
        H(3, 1, (1, 2, 5))
    with pytest.raises(ValueError):
        H(3, 2, (1, 2, 3), (1, 2, 3))


def test_round_trip():
    h = H(5, 2, (3, 4, 5), (1, 2, 3))
    assert parse_instance(format_hypergraph(h, ["note"])) == h
    m = H(3, 2, (1, 2, 3), (1, 2, 3), multi=True)
    assert parse_instance(format_hypergraph(m)) == m
    g = Graph(3, 2, ((1, 2), (2, 3)))
    assert parse_instance(format_graph(g)) == g


@pytest.mark.parametrize("text", [
    "", "1 2 3\n", "p hgr 3 3 1 2\n1 2 3\n", "p hgr 3 3 1 1\n1 2 x\n",
    "p foo 1\n", "p gr 3 1 1\n1 2 3\n", "p hgr 3 3 1 1 weird\n1 2 3\n",
])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_instance(text)


def test_helpers():
    k4 = complete_hypergraph(3, 4)
    assert k4.m == 4 and k4.delta_bound == 3
    u = disjoint_union([k4, k4])
    assert u.n == 8 and u.edges[-1] == (6, 7, 8)
    assert monochromatic_edges(k4, [0, 1, 1, 1, 2]) == 1
