import random

import pytest

from bdhyper.cnf import CnfFormula, brute_force_sat, random_kc_formula
from bdhyper.core import (CapacityError, DomainError, Graph, Hypergraph,
                          build_adjacency, gaifman, monochromatic_edges)
from bdhyper.oracle import CnfOracle, GraphOracle, HypergraphOracle
from bdhyper.reductions import (build_rho_kcol, coloring_from_assignment,
                                make_local_adapter, rho_3par,
                                rho_3par_inverse, rho_ind, rho_kcol,
                                rho_kpar, rho_par_tw)
from bdhyper.solvers import is_k_partite
from bdhyper.suites import random_graph, random_hypergraph

K3 = Graph(3, 2, ((1, 2), (1, 3), (2, 3)))
PAIR = CnfFormula(3, ((1, 2, 3), (-1, -2, -3)))


def test_rho_3par_examples():
    assert rho_3par(K3).edges == ((1, 2, 4), (1, 3, 5), (2, 3, 7))
    assert rho_3par(Graph(2, 1, ((1, 2),))).edges == ((1, 2, 3),)
    assert rho_3par(Graph(3, 1, ())).edges == ()


def test_rho_3par_inverse():
    g = random_graph(8, 3, random.Random(4))
    assert set(rho_3par_inverse(rho_3par(g), g.n).edges) == set(g.edges)


def test_rho_kpar():
    a, b = rho_kpar(K3, 3), rho_3par(K3)
    assert [e[:2] for e in a.edges] == [e[:2] for e in b.edges]
    h = rho_kpar(Graph(2, 1, ((1, 2),)), 4)
    assert h.n == 4 and h.edges == ((1, 2, 3, 4),)
    g = random_graph(9, 3, random.Random(1))
    deg = rho_kpar(g, 4).degrees()
    assert all(deg[v] == 1 for v in range(g.n + 1, len(deg)))
    with pytest.raises(DomainError):
        rho_kpar(K3, 2)


def test_rho_par_tw_is_gaifman():
    h = Hypergraph(3, 4, 2, ((1, 2, 3), (2, 3, 4)))
    assert rho_par_tw(h) == gaifman(h)


def test_rho_ind():
    h = rho_ind(Hypergraph(3, 3, 1, ((1, 2, 3),)))
    assert h.n == 9 and h.m == 6
    e = rho_ind(Hypergraph(3, 2, 1, ()))
    assert e.edges == ((1, 2, 3), (4, 5, 6))


def test_rho_ind_partition_gives_independent_set():
    h = Hypergraph(3, 6, 2, ((1, 2, 3), (4, 5, 6), (1, 5, 3)))
    col = is_k_partite(h)
    s = {3 * (u - 1) + col[u] for u in range(1, h.n + 1)}
    assert not any(set(e) <= s for e in rho_ind(h).edges)


def test_rho_3col_sizes():
    red = build_rho_kcol(PAIR, 3)
    lay = red.layout
    assert lay.L == 12 and lay.P == 24
    assert red.hypergraph.max_degree() <= lay.delta


def test_rho_kcol_k3_matches_rho_3col():
    assert rho_kcol(PAIR, 3) == build_rho_kcol(PAIR, 3).hypergraph


@pytest.mark.parametrize("k", [3, 4])
def test_constructed_coloring(k):
    red = build_rho_kcol(PAIR, k)
    col = coloring_from_assignment(red, brute_force_sat(PAIR))
    assert col is not None and max(col) <= k
    assert monochromatic_edges(red.hypergraph, col) == 0


def test_violating_assignment_has_no_construction():
    red = build_rho_kcol(PAIR, 3)
    assert coloring_from_assignment(red, (0, 0, 0)) is None


def test_rho_kcol_rejects():
    with pytest.raises(DomainError):
        build_rho_kcol(CnfFormula(2, ((1, 2),)))
    with pytest.raises(CapacityError):
        build_rho_kcol(PAIR, 5)


def _rows(o):
    return [[o.query(v, j) for j in range(1, o.delta + 1)]
            for v in range(1, o.n + 1)]


def test_three_par_adapter_matches():
    for s in range(20):
        g = random_graph(10, 3, random.Random(s))
        ad = make_local_adapter("rho_3par", GraphOracle(g))
        assert _rows(ad) == build_adjacency(rho_3par(g, 3))


def test_three_par_adapter_apex_query():
    base = GraphOracle(K3)
    ad = make_local_adapter("rho_3par", base)
    assert ad.query(4, 1) == (1, 2, 4) and base.snapshot_count() == 1


def test_par_tw_adapter_matches():
    for s in range(50):
        h = random_hypergraph(12, 3, random.Random(s))
        ad = make_local_adapter("rho_par_tw", HypergraphOracle(h))
        g = gaifman(h)
        want = g.neighbors()
        for v in range(1, h.n + 1):
            got = [w for w in (ad.query(v, j) for j in range(1, ad.delta + 1))
                   if w is not None]
            assert got == want[v]


def test_ind_adapter_matches():
    for s in range(20):
        h = random_hypergraph(8, 3, random.Random(s))
        ad = make_local_adapter("rho_ind", HypergraphOracle(h))
        assert _rows(ad) == build_adjacency(rho_ind(h))


def test_col_adapter_matches():
    f = random_kc_formula(3, 1, 0)
    red = build_rho_kcol(f, 3)
    ad = make_local_adapter("rho_3col", CnfOracle(f, 1),
                            {"expander": red.layout.expander})
    rows = build_adjacency(red.hypergraph)
    for v in range(1, ad.n + 1, 7):
        assert [ad.query(v, j) for j in range(1, ad.delta + 1)] == rows[v - 1]


def test_kpar_has_no_adapter():
    with pytest.raises(CapacityError):
        make_local_adapter("rho_kpar", GraphOracle(K3))
