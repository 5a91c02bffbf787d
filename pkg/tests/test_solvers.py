from fractions import Fraction

import pytest

from bdhyper.cnf import all_sign_patterns
from bdhyper.core import (CapacityError, DomainError, Graph, Hypergraph,
                          complete_hypergraph, monochromatic_edges,
                          non_rainbow_edges)
from bdhyper.generators import far_bounded_tw_family
from bdhyper.reductions import build_rho_kcol, rho_3par, rho_ind
from bdhyper.solvers import (PropertySpec, distance_to_property,
                             format_witness, graph_colorable, has_property,
                             independence_number, is_k_partite,
                             is_weak_colorable, min_edges_inside,
                             min_violations, min_violations_decomposed)

ONE = Hypergraph(3, 3, 1, ((1, 2, 3),))
K4 = complete_hypergraph(3, 4)
K3 = Graph(3, 2, ((1, 2), (1, 3), (2, 3)))
C5 = Graph(5, 2, ((1, 2), (2, 3), (3, 4), (4, 5), (1, 5)))


def test_weak_coloring():
    assert tuple(is_weak_colorable(ONE, 2).assignment) == (1, 1, 2)
    assert tuple(is_weak_colorable(K4, 2).assignment) == (1, 1, 2, 2)
    assert is_weak_colorable(K4, 3) is not None


@pytest.mark.parametrize("mode", ["exhaustive", "propagation"])
def test_weak_modes_agree(mode):
    col = is_weak_colorable(K4, 2, mode=mode)
    assert col is not None and monochromatic_edges(K4, col) == 0


def test_k_partite():
    assert tuple(is_k_partite(ONE).assignment) == (1, 2, 3)
    assert is_k_partite(K4) is None
    col = is_k_partite(rho_3par(K3))
    assert tuple(col.assignment)[:3] == (1, 2, 3)
    assert non_rainbow_edges(rho_3par(K3), col) == 0


def test_independence():
    assert independence_number(Hypergraph(3, 5, 1, ()))[0] == 5
    assert independence_number(K4)[0] == 2
    assert independence_number(rho_ind(ONE))[0] == 6
    assert min_edges_inside(K4, 3)[0] == 1


def test_distance():
    spec = PropertySpec("k-partite")
    assert distance_to_property(ONE, spec) == 0
    assert distance_to_property(K4, spec) == Fraction(1, 6)
    assert distance_to_property(far_bounded_tw_family(8), spec) == Fraction(1, 6)
    assert distance_to_property(K3, PropertySpec("graph-colorable", 2)) == \
        Fraction(1, 6)
    assert distance_to_property(rho_ind(K4), PropertySpec(
        "independence-at-least", 4)) == 0


def test_graph_coloring():
    assert tuple(graph_colorable(K3, 3).assignment) == (1, 2, 3)
    assert graph_colorable(Graph(4, 3, ((1, 2), (1, 3), (1, 4), (2, 3),
                                        (2, 4), (3, 4))), 3) is None
    assert graph_colorable(C5, 2) is None
    assert graph_colorable(C5, 3) is not None


def test_budget_is_explicit():
    with pytest.raises(CapacityError):
        is_k_partite(far_bounded_tw_family(40), budget=10)


def test_spec_validation_and_witness():
    with pytest.raises(DomainError):
        PropertySpec("planar")
    assert format_witness(is_k_partite(ONE)) == \
        "s col 1 1\ns col 2 2\ns col 3 3\n"
    assert has_property(K4, PropertySpec("independence-at-least", 2)) is not None
    assert has_property(K4, PropertySpec("independence-at-least", 3)) is None


def test_min_violations():
    count, col = min_violations(K4, 3, True)
    assert count == 2 and non_rainbow_edges(K4, (0,) + col) == 2


def test_decomposed_search():
    red = build_rho_kcol(all_sign_patterns(3), 3)
    order = red.layout.search_order()
    assert min_violations_decomposed(red.hypergraph, 3, 0, order) is None
    count, col = min_violations_decomposed(red.hypergraph, 3, 1, order)
    assert count == 1 and monochromatic_edges(red.hypergraph, col) == 1
