from fractions import Fraction

import pytest

from bdhyper.core import DomainError
from bdhyper.generators import far_bounded_tw_family, yes_bounded_tw_family
from bdhyper.oracle import HypergraphOracle
from bdhyper.solvers import is_k_partite
from bdhyper.testers import TesterConfig as Cfg
from bdhyper.testers import (ball_tester_kpartite,
                             derive_seed, estimate_acceptance,
                             format_locality, measure_locality, run_trials)

FAR = far_bounded_tw_family(120)


def yes(seed):
    return yes_bounded_tw_family(60, seed)[0]


def test_config_defaults_and_checks():
    assert Cfg(0.05).sample_count == 160
    for bad in (0, 1, -0.1):
        with pytest.raises(DomainError):
            Cfg(bad)
    with pytest.raises(DomainError):
        Cfg(0.1, radius=0)


def test_derive_seed_stable():
    assert derive_seed(0, 1) == derive_seed(0, 1) != derive_seed(0, 2)
    assert 0 <= derive_seed(5, 0) < 2 ** 64


def test_yes_instances_accept():
    for s in range(30):
        h = yes(s)
        r = ball_tester_kpartite(HypergraphOracle(h), h.n, Cfg(0.1), s)
        assert r.verdict == "accept"


def test_far_rejects_with_witness():
    r = ball_tester_kpartite(HypergraphOracle(FAR), 120, Cfg(0.05), 3)
    assert r.verdict == "reject"
    w = r.witness()
    assert w is not None and is_k_partite(w) is None


def test_query_counts_independent_of_n():
    big = far_bounded_tw_family(480)
    cfg = Cfg(0.05)
    for s in range(10):
        a = ball_tester_kpartite(HypergraphOracle(FAR), 120, cfg, s)
        b = ball_tester_kpartite(HypergraphOracle(big), 480, cfg, s)
        assert a.queries_used == b.queries_used


def test_report_text_is_stable():
    cfg = Cfg(0.25)
    h = yes(1)
    a = ball_tester_kpartite(HypergraphOracle(h), h.n, cfg, 9).text()
    b = ball_tester_kpartite(HypergraphOracle(h), h.n, cfg, 9).text()
    assert a == b
    assert a.splitlines()[:3] == ["verdict=accept", a.splitlines()[1],
                                  "seed=9"]
    assert a.splitlines()[1].startswith("queries=")


def test_truncated_balls_accept():
    cfg = Cfg(0.5, ball_budget=2)
    r = ball_tester_kpartite(HypergraphOracle(FAR), 120, cfg, 0)
    assert r.verdict == "accept"
    assert {b.verdict for b in r.balls} == {"truncated"}


def test_size_mismatch():
    with pytest.raises(DomainError):
        ball_tester_kpartite(HypergraphOracle(FAR), 100, Cfg(0.1), 0)


def test_estimate_acceptance():
    acc, se = estimate_acceptance(yes, Cfg(0.25), 20, 0)
    assert acc == 1 and se == 0
    acc, _ = estimate_acceptance(lambda s: FAR, Cfg(0.05), 20, 0)
    assert acc <= Fraction(1, 3)
    with pytest.raises(DomainError):
        run_trials(yes, Cfg(0.1), 0, 0)


def test_trials_sorted_and_reproducible():
    a = run_trials(yes, Cfg(0.25), 5, 7)
    b = run_trials(yes, Cfg(0.25), 5, 7)
    assert [r.seed for r in a] == [derive_seed(7, i) for i in range(5)]
    assert [r.text() for r in a] == [r.text() for r in b]


def test_locality_rows():
    row = measure_locality("rho_3par", [60, 120])
    assert row["equal"] and set(row["apex"].values()) == {1}
    assert "rho_3par" in format_locality([row])
    assert measure_locality("rho_ind", [60, 120])["max"] == {60: 1, 120: 1}
    with pytest.raises(DomainError):
        measure_locality("rho_3par", [60])
