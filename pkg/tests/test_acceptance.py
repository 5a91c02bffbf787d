"""Acceptance criteria 1-10, one test each, plus a PASS/FAIL summary line
per criterion at the end of the module.

Run alone with `pytest tests/test_acceptance.py -v` or
`python3 tests/test_acceptance.py`.
"""

import time

import pytest

from bdhyper import suites

RESULTS: dict[int, tuple[bool, str]] = {}
NAMES = {
    1: "gadget forcing",
    2: "exhaustive reduction equivalences",
    3: "gap inequalities",
    4: "adapter locality",
    5: "simplicity",
    6: "coloring reduction soundness",
    7: "random triple-partition statistics",
    8: "arc-counting construction",
    9: "tester completeness, rejection, size independence",
    10: "determinism and documented examples",
}


def record(n: int, ok: bool, detail: str = "") -> None:
    RESULTS[n] = (ok, detail)
    print(f"criterion {n} {'PASS' if ok else 'FAIL'}: {NAMES[n]}"
          + (f" ({detail})" if detail else ""))


@pytest.fixture(scope="module", autouse=True)
def summary(request):
    yield
    rep = request.config.pluginmanager.getplugin("terminalreporter")
    lines = ["", "acceptance summary"]
    for n in sorted(NAMES):
        ok, detail = RESULTS.get(n, (False, "not run"))
        lines.append(f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  "
                     f"{NAMES[n]}" + (f": {detail}" if detail else ""))
    text = "\n".join(lines) + "\n"
    if rep is not None:
        rep.write(text)
    else:
        print(text)


def _suite(n: int, fn, limit: float | None = None):
    t0 = time.perf_counter()
    res = fn()
    dt = time.perf_counter() - t0
    ok = res.passed and (limit is None or dt < limit)
    record(n, ok, f"{dt:.1f}s")
    print(res.text())
    return res, dt


def test_c1_gadget_forcing():
    res, dt = _suite(1, suites.gadget_suite, 10)
    assert res.passed and dt < 10


def test_c2_reduction_equivalences():
    t0 = time.perf_counter()
    full = suites.reduction_suite()
    dt = time.perf_counter() - t0
    checks = {k: v for k, v in full.checks.items() if k != "simplicity"}
    ok = all(checks.values()) and dt < 300
    record(2, ok, f"{len(checks)} checks, {dt:.1f}s")
    print(full.text())
    assert ok


class TestGaps:
    """c1 = delta_H * N_H / m and c2 = d + 1 are fixed before testing; the
    rho_ind constant 9(d+1) fails on small instances."""

    parts: dict[str, bool] = {}

    def _close(self):
        if len(self.parts) == 3:
            bad = [k for k, v in self.parts.items() if not v]
            record(3, not bad, "failing: " + ", ".join(bad) if bad else
                   "c1, c2 and rho_ind all hold")

    def test_c3_sat_gap(self):
        fails, unverified, notes = suites.gap_c1(200)
        print("\n".join(notes))
        self.parts["c1"] = fails == 0 and unverified == 0
        self._close()
        assert fails == 0 and unverified == 0

    def test_c3_partite_gap(self):
        fails, notes = suites.gap_c2(200)
        print("\n".join(notes))
        self.parts["c2"] = fails == 0
        self._close()
        assert fails == 0

    @pytest.mark.xfail(strict=True, reason="the 9(d+1) bound fails: "
                       "K4^(3) has distance 1/6 to 3-partiteness while "
                       "alpha(rho_ind(K4^(3))) >= 4 already holds")
    def test_c3_independence_gap(self):
        fails, notes = suites.gap_ind(200)
        print("\n".join(notes))
        self.parts["rho_ind"] = fails == 0
        self._close()
        assert fails == 0


def test_c4_locality():
    res, _ = _suite(4, suites.locality_suite)
    assert res.passed


def test_c5_simplicity():
    ok = suites.simplicity_ok(1000)
    record(5, ok, "1000 seeded graphs")
    assert ok


def test_c6_soundness():
    res, _ = _suite(6, suites.soundness_suite)
    assert res.passed


def test_c7_appendix_b_statistics():
    res, dt = _suite(7, suites.appendix_b_suite, 120)
    assert res.passed and dt < 120


def test_c8_construction():
    res, _ = _suite(8, suites.construction_suite)
    assert res.passed


def test_c9_tester():
    res, dt = _suite(9, suites.tester_suite, 120)
    assert res.passed and dt < 120


def test_c10_determinism():
    res, _ = _suite(10, suites.determinism_suite)
    assert res.passed


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
