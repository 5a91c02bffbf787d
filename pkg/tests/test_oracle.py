import io

import pytest

from bdhyper.core import BOTTOM, DomainError, Graph, Hypergraph
from bdhyper.cnf import CnfFormula
from bdhyper.oracle import (CnfOracle, GraphOracle, HypergraphOracle,
                            make_oracle, materialize_rows)
from bdhyper.reductions import make_local_adapter


def test_queries():
    o = HypergraphOracle(Hypergraph(3, 3, 2, ((1, 2, 3),)))
    assert o.query(1, 1) == (1, 2, 3)
    assert o.query(1, 2) is BOTTOM
    o = HypergraphOracle(Hypergraph(3, 4, 2, ((1, 2, 3), (1, 2, 4))))
    assert o.query(2, 2) == (1, 2, 4)


def test_counting():
    o = HypergraphOracle(Hypergraph(3, 3, 1, ((1, 2, 3),)))
    assert o.snapshot_count() == 0
    for v in (1, 2, 3):
        o.query(v, 1)
    assert o.snapshot_count() == 3
    o.reset_count()
    assert o.snapshot_count() == 0


def test_adapter_counts_base_queries():
    base = GraphOracle(Graph(2, 1, ((1, 2),)))
    ad = make_local_adapter("rho_3par", base)
    assert ad.query(2, 1) == (1, 2, 3)
    assert base.snapshot_count() == 2 and ad.snapshot_count() == 1


@pytest.mark.parametrize("v,j", [(0, 1), (4, 1), (1, 0), (1, 3)])
def test_range(v, j):
    o = HypergraphOracle(Hypergraph(3, 3, 2, ((1, 2, 3),)))
    with pytest.raises(DomainError):
        o.query(v, j)


def test_trace_and_graph_oracle():
    buf = io.StringIO()
    o = make_oracle(Graph(3, 2, ((1, 2), (2, 3))), buf)
    assert o.row(2) == [1, 3]
    assert o.query(1, 2) is BOTTOM
    assert buf.getvalue().splitlines() == [
        "Q base 2 1 -> 1", "Q base 2 2 -> 3", "Q base 1 2 -> _"]
    assert materialize_rows(o) == [[2, BOTTOM], [1, 3], [2, BOTTOM]]
    with pytest.raises(TypeError):
        make_oracle("nope")


def test_cnf_oracle():
    o = CnfOracle(CnfFormula(3, ((1, 2, 3), (-1, -2, -3))), 1)
    assert o.query(-2, 1) == (2, (-1, -2, -3))
    assert o.clause(1) == (1, 2, 3)
    assert o.snapshot_count() == 2
    with pytest.raises(DomainError):
        o.query(4, 1)
