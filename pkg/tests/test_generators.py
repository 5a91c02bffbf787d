from fractions import Fraction
from itertools import combinations

import pytest

from bdhyper.cnf import brute_force_sat, regularize, to_exact_three
from bdhyper.core import DomainError, Graph, parse_instance
from bdhyper.generators import (CspInstance, GenerationError,
                                appendix_b_batch, build_fn,
                                csp_assignments_ok, csp_to_3cnf,
                                expansion_ok, far_bounded_tw_family,
                                h_eval, hard_instance_pipeline,
                                random_regular_expander, replay_manifest,
                                sample_appendix_b, yes_bounded_tw_family)
from bdhyper.reductions import build_rho_kcol
from bdhyper.solvers import (PropertySpec, distance_to_property,
                             independence_number, is_k_partite)

K4 = Graph(4, 3, tuple(combinations(range(1, 5), 2)))
C6 = Graph(6, 2, tuple((i, i % 6 + 1) if i < 6 else (1, 6)
                       for i in range(1, 7)))


def test_expansion_check():
    assert expansion_ok(K4)
    assert not expansion_ok(C6)


def test_expander_seeded_and_impossible_ratio():
    with pytest.raises(GenerationError):
        random_regular_expander(12, 3, 7)
    e = random_regular_expander(12, 3, 7, ratio=Fraction(1, 2))
    assert e.certificate == "exhaustive"
    assert e.graph == random_regular_expander(12, 3, 7, ratio=Fraction(1, 2)).graph
    assert {len(r) for r in e.graph.neighbors()[1:]} == {3}
    with pytest.raises(DomainError):
        random_regular_expander(5, 3, 0)


def test_appendix_b():
    assert sample_appendix_b(3, 1, 0).edges == ((1, 2, 3),)
    h = sample_appendix_b(30, 3, 7)
    assert set(h.degrees()[1:]) == {3}
    assert h == sample_appendix_b(30, 3, 7)
    t = appendix_b_batch(9, 2, 50, 1)
    assert t.shape == (50, 6, 3)
    with pytest.raises(DomainError):
        sample_appendix_b(31, 3, 0)


def test_h_eval():
    assert h_eval((1, 0), (0, 0))
    assert not h_eval((1, 1), (1, 1))
    assert not h_eval((0, 0), (1, 1))


def test_build_fn_k4():
    csp = build_fn(K4)
    assert csp.var_count == 12 and csp.n == 4
    assert not csp_assignments_ok(csp)
    assert all(csp_assignments_ok(csp, [c]) for c in range(4))


def test_csp_to_3cnf():
    f, occ = csp_to_3cnf(build_fn(K4))
    assert all(len(cl) <= 3 for cl in f.clauses)
    assert brute_force_sat(f, limit=f.var_count) is None
    toy = CspInstance(2, 1, ((1, 2), (2, 1), (1, 2), (2, 1)),
                      (((1,), (2,)), ((3,), (4,))))
    g, _ = csp_to_3cnf(toy)
    a = brute_force_sat(g)
    assert a is not None and toy.satisfied(a[:4]) == 2


def test_far_family():
    one = far_bounded_tw_family(4)
    assert distance_to_property(one, PropertySpec("k-partite")) == Fraction(1, 6)
    assert independence_number(one)[0] == 2
    assert distance_to_property(far_bounded_tw_family(40),
                                PropertySpec("k-partite")) == Fraction(1, 6)
    with pytest.raises(DomainError):
        far_bounded_tw_family(10)


def test_yes_family():
    for s in range(100):
        h, part = yes_bounded_tw_family(40, s)
        assert h.max_degree() <= h.delta_bound
        assert all(len({part[v - 1] for v in e}) == 3 for e in h.edges)
    assert is_k_partite(yes_bounded_tw_family(40, 3)[0]) is not None


@pytest.fixture(scope="module")
def pipeline():
    return hard_instance_pipeline(3, "3col-hypergraph", 0)


def test_pipeline_identity_and_replay(pipeline):
    res = pipeline
    d = dict(res.manifest)
    assert res.instance.max_degree() <= int(d["delta"])
    e = random_regular_expander(3, 2, 0)
    f, _ = csp_to_3cnf(build_fn(e))
    f3r, _ = regularize(to_exact_three(f), 0)
    assert res.formula == f3r
    assert res.instance == build_rho_kcol(f3r, 3, res.expander).hypergraph
    assert replay_manifest(res.text()).text() == res.text()


def test_pipeline_lazy_stack():
    res = hard_instance_pipeline(3, "ind-number", 0)
    assert res.instance is None
    o = res.oracle()
    assert o.n == int(dict(res.manifest)["n"])
    ans = o.query(1, 1)
    assert ans is None or len(ans) == 3


def test_pipeline_text_parses(pipeline):
    assert parse_instance(pipeline.text()) == pipeline.instance
