from itertools import product

import pytest

from bdhyper.core import CapacityError
from bdhyper.gadgets import (AuxAllocator, anchor_relation, clause_gadget,
                             clause_edge_count, equality_edge_count,
                             equality_gadget, extendable, inequality_gadget,
                             not_dummy_gadget, verify_forcing)

eq = lambda t: t[0] == t[1]
ne = lambda t: t[0] != t[1]


def alloc():
    return AuxAllocator({}, 100)


def test_equality_shape_and_relation():
    g = equality_gadget(1, 2, alloc(), 3)
    assert len(g.hyperedges) == 30 == equality_edge_count(3)
    assert anchor_relation(g, 3) == {(c, c) for c in (1, 2, 3)}
    assert verify_forcing(g, eq)
    assert not verify_forcing(g, ne)


def test_equality_aux_count_k4():
    assert len(equality_gadget(1, 2, alloc(), 4).aux) == 11


def test_inequality():
    g = inequality_gadget(1, 2, alloc(), 3)
    assert len(g.hyperedges) == 62
    assert anchor_relation(g, 3) == {(a, b) for a, b in product((1, 2, 3), repeat=2)
                                     if a != b}
    assert verify_forcing(inequality_gadget(1, 2, alloc(), 4), ne, 4,
                          contract=True)


def test_not_dummy():
    g = not_dummy_gadget(1, [[5, 6]], 3)
    assert g.hyperedges == ((1, 5, 6),)
    rel = anchor_relation(g, 3, {5: 3, 6: 3})
    assert {t[0] for t in rel} == {1, 2}


def _clause():
    copies = [(1, 2), (3, 4), (5, 6)]
    tg = [[7, 8], [9, 10], [11, 12]]
    return clause_gadget(copies, tg, alloc(), 3), {v: 1 for g in tg for v in g}


def test_clause_count():
    g, _ = _clause()
    assert len(g.hyperedges) == 7 == clause_edge_count(3)


def test_clause_forbids_all_false():
    g, fixed = _clause()
    for lits in product((1, 2), repeat=3):
        f = dict(fixed)
        for r, c in enumerate(lits):
            f[g.anchors[2 * r]] = f[g.anchors[2 * r + 1]] = c
        ok = extendable(g.hyperedges, 3, f, g.aux)
        assert ok == (lits != (2, 2, 2))


def test_clause_argument_checks():
    with pytest.raises(ValueError):
        clause_gadget([(1, 2), (3, 4)], [[7, 8]] * 3, alloc(), 3)


def test_closure_limit():
    g = inequality_gadget(1, 2, alloc(), 4)
    with pytest.raises(CapacityError):
        anchor_relation(g, 4, limit=20)


def test_fresh_ids_unique():
    a = alloc()
    g1 = equality_gadget(1, 2, a, 3)
    g2 = equality_gadget(3, 4, a, 3)
    assert not set(g1.aux) & set(g2.aux)
