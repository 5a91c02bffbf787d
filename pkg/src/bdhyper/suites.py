"""Property suites behind `bdhyper verify` and the acceptance tests.

Each suite returns a SuiteResult whose lines form a PASS/FAIL report.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product

import numpy as np

from .core import (CapacityError, Graph, Hypergraph, complete_hypergraph,
                   monochromatic_edges)
from .cnf import (CnfFormula, all_sign_patterns, brute_force_sat,
                  max_sat_fraction, min_unsat, random_kc_formula)
from .gadgets import (AuxAllocator, clause_gadget, equality_gadget,
                      inequality_gadget, not_dummy_gadget, verify_forcing)
from .generators import (CspInstance, all_regular_graphs, appendix_b_batch,
                         build_fn, csp_assignments_ok, csp_to_3cnf,
                         edges_inside_counts, expansion_impossible,
                         expansion_ok, expected_inside,
                         far_bounded_tw_family, h_eval, multi_edge_rate,
                         yes_bounded_tw_family)
from .reductions import (build_rho_kcol, coloring_from_assignment, rho_3par,
                         rho_ind, rho_kpar)
from .solvers import (PropertySpec, distance_to_property, graph_colorable,
                      is_k_partite, min_violations_decomposed)


@dataclass
class SuiteResult:
    name: str
    lines: list[str] = field(default_factory=list)
    checks: dict[str, bool] = field(default_factory=dict)

    def check(self, label: str, ok: bool, detail: str = "") -> bool:
        self.checks[label] = bool(ok)
        self.lines.append(f"{'PASS' if ok else 'FAIL'} {label}"
                          + (f": {detail}" if detail else ""))
        return ok

    def note(self, text: str) -> None:
        self.lines.append(f"     {text}")

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def text(self) -> str:
        head = f"suite {self.name}: {'PASS' if self.passed else 'FAIL'}"
        return "\n".join([head] + self.lines) + "\n"


# -- gadgets ---------------------------------------------------------------------

def _alloc(k: int) -> AuxAllocator:
    return AuxAllocator({}, 100)


def gadget_suite() -> SuiteResult:
    r = SuiteResult("gadgets")
    t0 = time.perf_counter()
    eq = lambda t: t[0] == t[1]
    ne = lambda t: t[0] != t[1]
    for k in (3, 4):
        g = equality_gadget(1, 2, _alloc(k), k)
        r.check(f"equality k={k}", verify_forcing(g, eq, k),
                f"{len(g.aux)} aux, {len(g.hyperedges)} edges")
        g = inequality_gadget(1, 2, _alloc(k), k)
        r.check(f"inequality k={k}",
                verify_forcing(g, ne, k, contract=k > 3),
                f"{len(g.hyperedges)} edges")
    g = equality_gadget(1, 2, _alloc(3), 3)
    r.check("equality rejects the inequality relation",
            not verify_forcing(g, ne, 3))
    # not-dummy: every dummy class fixed to its color
    for k in (3, 4):
        groups = [[10 + 10 * c + i for i in range(k - 1)]
                  for c in range(k - 2)]
        fixed = {v: 3 + c for c, grp in enumerate(groups) for v in grp}
        g = not_dummy_gadget(1, groups, k)
        r.check(f"not-dummy k={k}",
                verify_forcing(g, lambda t: t[0] in (1, 2), k, fixed))
    # clause: pools fixed (T=1, F=2, D_r=2+r); copies range over {TRUE, FALSE}
    for k in (3, 4):
        copies = [(1, 2), (3, 4), (5, 6)]
        nxt = iter(range(20, 80))
        tg = [[next(nxt) for _ in range(k - 1)] for _ in range(3)]
        dg = [[[next(nxt) for _ in range(k - 1)] for _ in range(k - 3)]
              for _ in range(3)]
        fp = [[next(nxt) for _ in range(k - 3)] for _ in range(3)]
        last = [next(nxt) for _ in range(k - 3)]
        g = clause_gadget(copies, tg, AuxAllocator({}, 100), k,
                          dg if k > 3 else (), fp if k > 3 else (), last)
        fixed = {v: 1 for grp in tg for v in grp}
        fixed.update({v: 4 for gs in dg for grp in gs for v in grp})
        fixed.update({v: 2 for p in fp for v in p})
        fixed.update({v: 3 for v in last})
        r.check(f"clause k={k}",
                verify_forcing(g, lambda t: t != (2,) * 6, k, fixed,
                               domain=(1, 2)),
                f"{len(g.hyperedges)} edges")
    r.note(f"elapsed {time.perf_counter() - t0:.2f}s")
    return r


# -- exhaustive reduction equivalences -------------------------------------------

def _graphs(n: int, max_deg: int):
    pairs = list(combinations(range(1, n + 1), 2))
    for mask in range(1 << len(pairs)):
        deg = [0] * (n + 1)
        edges = []
        ok = True
        for i, (u, v) in enumerate(pairs):
            if mask >> i & 1:
                deg[u] += 1
                deg[v] += 1
                if deg[u] > max_deg or deg[v] > max_deg:
                    ok = False
                    break
                edges.append((u, v))
        if ok:
            yield Graph(n, max_deg, tuple(edges))


def _popcount(a: np.ndarray) -> np.ndarray:
    a = a.astype(np.int64)
    c = np.zeros_like(a)
    while a.any():
        c += a & 1
        a >>= 1
    return c


def _hyper_masks(n: int, max_edges: int):
    """All 3-uniform edge sets on n vertices with at most max_edges edges,
    as bitmasks over the lexicographic list of triples."""
    triples = list(combinations(range(n), 3))
    allm = np.arange(1 << len(triples), dtype=np.int64)
    return triples, allm[_popcount(allm) <= max_edges]


def _any_cover(masks: np.ndarray, allowed: np.ndarray, chunk: int = 4096
               ) -> np.ndarray:
    """For each mask, whether mask is a subset of some allowed[c]."""
    out = np.zeros(masks.shape, dtype=bool)
    comp = ~allowed
    for s in range(0, len(masks), chunk):
        m = masks[s:s + chunk, None]
        out[s:s + chunk] = ((m & comp[None, :]) == 0).any(axis=1)
    return out


def hypergraph_equivalences(n: int, max_edges: int = 8) -> dict[str, int]:
    """Exhaustive counts for all 3-uniform H on n vertices:
    partite/gaifman mismatches and partite H with alpha(rho_ind(H)) < n."""
    triples, masks = _hyper_masks(n, max_edges)
    pairs = list(combinations(range(n), 2))
    pidx = {p: i for i, p in enumerate(pairs)}
    cols = np.array(list(product(range(3), repeat=n)), dtype=np.int64)
    rainbow = np.zeros(len(cols), dtype=np.int64)
    for t, (a, b, c) in enumerate(triples):
        ok = ((cols[:, a] != cols[:, b]) & (cols[:, a] != cols[:, c])
              & (cols[:, b] != cols[:, c]))
        rainbow |= ok.astype(np.int64) << t
    proper = np.zeros(len(cols), dtype=np.int64)
    for i, (a, b) in enumerate(pairs):
        proper |= (cols[:, a] != cols[:, b]).astype(np.int64) << i
    pmask = [(1 << pidx[(a, b)]) | (1 << pidx[(a, c)]) | (1 << pidx[(b, c)])
             for a, b, c in triples]
    gmask = np.zeros_like(masks)
    for t, pm in enumerate(pmask):
        gmask |= np.where(masks >> t & 1, pm, 0)
    partite = _any_cover(masks, np.unique(rainbow))
    colorable = _any_cover(gmask, np.unique(proper))
    # independent n-sets of rho_ind(H): vertex (u, i) -> 3u + i
    kill = set()
    for s in combinations(range(3 * n), n):
        ss = set(s)
        if any({3 * u, 3 * u + 1, 3 * u + 2} <= ss for u in range(n)):
            continue
        km = 0
        for t, (a, b, c) in enumerate(triples):
            if any({3 * a + i, 3 * b + i, 3 * c + i} <= ss for i in range(3)):
                km |= 1 << t
        kill.add(km)
    kill_arr = np.array(sorted(kill), dtype=np.int64)
    # H has an independent n-set iff H avoids some kill mask
    full = (1 << len(triples)) - 1
    indep = _any_cover(masks, full ^ kill_arr) if len(kill_arr) else \
        np.zeros(masks.shape, dtype=bool)
    return {"instances": int(len(masks)),
            "partite": int(partite.sum()),
            "mismatch": int((partite != colorable).sum()),
            "forward_fail": int((partite & ~indep).sum())}


def reduction_suite(max_n: int = 6, simplicity_graphs: int = 1000
                    ) -> SuiteResult:
    r = SuiteResult("reductions")
    t0 = time.perf_counter()
    bad, total = 0, 0
    for n in range(1, max_n + 1):
        for g in _graphs(n, 3):
            total += 1
            a = graph_colorable(g, 3) is not None
            b = is_k_partite(rho_3par(g)) is not None
            bad += a != b
    r.check("3-colorable(G) <=> 3-partite(rho_3par(G))", bad == 0,
            f"{total} labeled graphs, n <= {max_n}, max degree 3")
    for n in range(3, max_n + 1):
        c = hypergraph_equivalences(n)
        r.check(f"3-partite(H) <=> 3-colorable(gaifman(H)), n={n}",
                c["mismatch"] == 0, f"{c['instances']} edge sets")
        r.check(f"3-partite(H) => alpha(rho_ind(H)) >= n, n={n}",
                c["forward_fail"] == 0, f"{c['partite']} partite")
    r.check("simplicity", simplicity_ok(simplicity_graphs),
            f"{simplicity_graphs} seeded graphs, rho_3par and rho_kpar k=4")
    r.note(f"elapsed {time.perf_counter() - t0:.1f}s")
    return r


def random_graph(n: int, max_deg: int, rng: random.Random) -> Graph:
    pairs = list(combinations(range(1, n + 1), 2))
    rng.shuffle(pairs)
    deg = [0] * (n + 1)
    edges = []
    for u, v in pairs[:rng.randint(0, len(pairs))]:
        if deg[u] < max_deg and deg[v] < max_deg:
            deg[u] += 1
            deg[v] += 1
            edges.append((u, v))
    return Graph(n, max_deg, tuple(sorted(edges)))


def random_hypergraph(n: int, max_deg: int, rng: random.Random) -> Hypergraph:
    trip = list(combinations(range(1, n + 1), 3))
    rng.shuffle(trip)
    deg = [0] * (n + 1)
    edges = []
    for e in trip[:rng.randint(1, len(trip))]:
        if all(deg[v] < max_deg for v in e):
            for v in e:
                deg[v] += 1
            edges.append(e)
    return Hypergraph(3, n, max_deg, tuple(sorted(edges)))


def simplicity_ok(count: int, seed: int = 0) -> bool:
    for i in range(count):
        rng = random.Random(seed * 100003 + i)
        g = random_graph(rng.randint(2, 30), 3, rng)
        for h in (rho_3par(g), rho_kpar(g, 4)):
            seen = set()
            for e in h.edges:
                for p in combinations(e, 2):
                    if p in seen:
                        return False
                    seen.add(p)
    return True


# -- gap inequalities -------------------------------------------------------------

def planted_formula(seed: int) -> CnfFormula:
    """All eight sign patterns over x1..x3 next to a random (3,4)-CNF over
    x4..x9: a (3,4)-CNF on 9 variables with at least one unsatisfied
    clause."""
    g = random_kc_formula(6, 4, seed, max_tries=100000)
    shifted = tuple(tuple(l + 3 if l > 0 else l - 3 for l in cl)
                    for cl in g.clauses)
    return CnfFormula(9, all_sign_patterns(3).clauses + shifted)


def gap_formula(i: int, seed: int = 0) -> CnfFormula:
    rng = random.Random(seed * 100003 + i)
    if i % 8 == 0:
        return planted_formula(rng.randrange(10 ** 9))
    while True:
        n = rng.randint(3, 10)
        c = rng.choice([c for c in (1, 2, 3) if 2 * n * c % 3 == 0] or [3])
        try:
            return random_kc_formula(n, c, rng.randrange(10 ** 9))
        except RuntimeError:
            continue


def gap_c1(count: int = 200, seed: int = 0, nodes: int = 10 ** 6
           ) -> tuple[int, int, list[str]]:
    """sat_distance(F) <= c1 * d(rho_3col(F), 3-colorable) with
    c1 = delta_H * N_H / m, i.e. minviol(H) >= min_unsat(F). Returns
    (failures, unverified, notes)."""
    fails = unverified = 0
    notes = []
    hist: dict[int, int] = {}
    for i in range(count):
        f = gap_formula(i, seed)
        u = min_unsat(f)
        hist[u] = hist.get(u, 0) + 1
        if u == 0:
            continue
        red = build_rho_kcol(f, 3, seed=seed)
        h = red.hypergraph
        try:
            res = min_violations_decomposed(h, 3, u - 1,
                                            red.layout.search_order(), nodes)
        except CapacityError:
            unverified += 1
            notes.append(f"instance {i}: min_unsat {u}, search over budget")
            continue
        if res is not None:
            fails += 1
            notes.append(f"instance {i}: coloring with {res[0]} < {u} "
                         "violations")
    notes.insert(0, "min_unsat histogram " + " ".join(
        f"{k}:{v}" for k, v in sorted(hist.items())))
    return fails, unverified, notes


def gap_c2(count: int = 200, seed: int = 0) -> tuple[int, list[str]]:
    """d(G, 3-col) <= (d+1) * d(rho_3par(G), 3-partite)."""
    fails = 0
    notes = []
    for i in range(count):
        rng = random.Random(seed * 100003 + i)
        g = random_graph(rng.randint(3, 10), 3, rng)
        lhs = distance_to_property(g, PropertySpec("graph-colorable", 3))
        rhs = distance_to_property(rho_3par(g), PropertySpec("k-partite"))
        if lhs > (g.delta_bound + 1) * rhs:
            fails += 1
            notes.append(f"instance {i}: {lhs} > {g.delta_bound + 1} * {rhs}")
    return fails, notes


def gap_ind(count: int = 200, seed: int = 0) -> tuple[int, list[str]]:
    """d(H, 3-partite) <= 9(d+1) * d(rho_ind(H), alpha >= n)."""
    fails = 0
    notes = []
    for i in range(count):
        rng = random.Random(seed * 100003 + i)
        h = random_hypergraph(rng.randint(4, 10), 3, rng)
        lhs = distance_to_property(h, PropertySpec("k-partite"))
        rhs = distance_to_property(rho_ind(h),
                                   PropertySpec("independence-at-least", h.n))
        if lhs > 9 * (h.delta_bound + 1) * rhs:
            fails += 1
            if len(notes) < 3:
                notes.append(f"instance {i} (n={h.n}, m={h.m}): "
                             f"{lhs} > {9 * (h.delta_bound + 1)} * {rhs}")
    k4 = complete_hypergraph(3, 4)
    notes.append("fixed case K4^(3): d(H,3-partite) = "
                 f"{distance_to_property(k4, PropertySpec('k-partite'))}, "
                 "d(rho_ind(H), alpha >= 4) = "
                 f"{distance_to_property(rho_ind(k4), PropertySpec('independence-at-least', 4))}")
    return fails, notes


def gap_suite(count: int = 200, seed: int = 0) -> SuiteResult:
    r = SuiteResult("gaps")
    r.note("c1 = delta_H * N_H / m (per instance); c2 = d + 1; "
           "rho_ind constant 9(d+1)")
    f1, un, notes = gap_c1(count, seed)
    r.check("sat_distance(F) <= c1 * d(rho_3col(F))", f1 == 0 and un == 0,
            f"{count} formulas, {f1} violations, {un} unverified")
    for s in notes:
        r.note(s)
    f2, notes = gap_c2(count, seed)
    r.check("d(G,3-col) <= c2 * d(rho_3par(G))", f2 == 0,
            f"{count} graphs, {f2} violations")
    for s in notes:
        r.note(s)
    f3, notes = gap_ind(count, seed)
    r.check("d(H,3-partite) <= 9(d+1) * d(rho_ind(H), alpha>=n)", f3 == 0,
            f"{count} hypergraphs, {f3} violations")
    for s in notes:
        r.note(s)
    return r


# -- locality ---------------------------------------------------------------------

def locality_suite(sizes=(60, 120, 240), seed: int = 0) -> SuiteResult:
    from .testers import LOCALITY_KINDS, format_locality, measure_locality
    r = SuiteResult("locality")
    rows = [measure_locality(k, list(sizes), seed) for k in LOCALITY_KINDS]
    for row in rows:
        r.check(f"{row['kind']} overhead equal across n", row["equal"],
                " ".join(f"n={n}:{v}" for n, v in row["max"].items()))
        if row["kind"] == "rho_3par":
            r.check("rho_3par apex overhead exactly 1",
                    set(row["apex"].values()) == {1})
    for line in format_locality(rows).splitlines():
        r.note(line)
    return r


# -- random triple-partition statistics ---------------------------------------------

def appendix_b_suite(seed: int = 0, samples: int = 10 ** 5,
                     rate_samples: int = 10 ** 4) -> SuiteResult:
    r = SuiteResult("appendix-b-stats")
    n, d, s = 9, 2, 4
    t = appendix_b_batch(n, d, samples, seed)
    counts = np.zeros((samples, n), dtype=np.int64)
    flat = t.reshape(samples, -1)
    rows = np.repeat(np.arange(samples), flat.shape[1])
    np.add.at(counts, (rows, flat.ravel()), 1)
    r.check("degree exactness", bool((counts == d).all()),
            f"{samples} samples at n={n}, d={d}")
    x = edges_inside_counts(n, d, list(range(s)), samples, seed)
    mean = float(x.mean())
    se = float(x.std(ddof=1) / np.sqrt(samples))
    want = expected_inside(n, d, s)
    r.check("E[X_S] within 3 standard errors",
            abs(mean - float(want)) <= 3 * se,
            f"mean {mean:.5f}, expected {want} = {float(want):.5f}, "
            f"se {se:.5f}")
    rates = [multi_edge_rate(m, 3, rate_samples, seed) for m in (30, 90, 300)]
    r.check("multi-edge rate strictly decreasing",
            rates[0] > rates[1] > rates[2],
            " ".join(f"n={m}:{v:.4f}" for m, v in zip((30, 90, 300), rates)))
    return r


# -- soundness of the coloring reduction at desk scale ----------------------------

def soundness_suite(nodes: int = 10 ** 8, seed: int = 0) -> SuiteResult:
    r = SuiteResult("soundness")
    f = all_sign_patterns(3)
    r.check("sign-pattern formula max-sat 7/8",
            max_sat_fraction(f) == Fraction(7, 8))
    red = build_rho_kcol(f, 3, seed=seed)
    res = min_violations_decomposed(red.hypergraph, 3, 0,
                                    red.layout.search_order(), nodes)
    r.check("rho_3col(sign patterns) not 3-colorable", res is None,
            f"{red.hypergraph.n} vertices, {red.hypergraph.m} edges")
    g = random_kc_formula(3, 1, seed)
    a = brute_force_sat(g)
    red = build_rho_kcol(g, 3, seed=seed)
    col = coloring_from_assignment(red, a)
    ok = (col is not None and all(1 <= c <= 3 for c in col[1:])
          and monochromatic_edges(red.hypergraph, col) == 0)
    r.check("satisfiable (3,1)-CNF gives a valid constructed 3-coloring", ok,
            f"{red.hypergraph.n} vertices")
    return r


# -- the arc-counting construction ------------------------------------------------

def verified_expanders(max_n: int = 6, max_vars: int = 18):
    """(n, d, graph) for every labeled d-regular graph with n <= max_n and
    dn <= max_vars passing the exhaustive expansion check."""
    for n in range(2, max_n + 1):
        for d in range(1, n):
            if n * d % 2 or n * d > max_vars or expansion_impossible(n, d):
                continue
            for g in all_regular_graphs(n, d):
                if expansion_ok(g):
                    yield n, d, g


def projection_matches_h(d: int) -> bool:
    """The 3-CNF of one h-constraint with d inputs per side, projected on
    its inputs, equals the truth table of h."""
    csp = CspInstance(1, d, tuple((i, 0) for i in range(2 * d)),
                      ((tuple(range(1, d + 1)),
                        tuple(range(d + 1, 2 * d + 1))),))
    f, _ = csp_to_3cnf(csp)
    extra = f.var_count - 2 * d
    for a in product((0, 1), repeat=2 * d):
        want = h_eval(a[:d], a[d:])
        got = any(f.satisfied_count(a + b) == f.m
                  for b in product((0, 1), repeat=extra))
        if got != want:
            return False
    return True


def construction_suite() -> SuiteResult:
    r = SuiteResult("construction")
    count = 0
    unsat = singles = pairs = True
    shapes: dict[tuple[int, int], int] = {}
    for n, d, g in verified_expanders():
        count += 1
        shapes[(n, d)] = shapes.get((n, d), 0) + 1
        csp = build_fn(g)
        unsat &= not csp_assignments_ok(csp)
        singles &= all(csp_assignments_ok(csp, [c]) for c in range(csp.n))
        if n >= 3:
            pairs &= all(csp_assignments_ok(csp, list(p))
                         for p in combinations(range(csp.n), 2))
    r.note("expanders " + " ".join(f"({n},{d})x{c}"
                                   for (n, d), c in sorted(shapes.items())))
    r.check("build_fn unsatisfiable", unsat, f"{count} expanders")
    r.check("every single constraint satisfiable", singles)
    r.check("every constraint pair satisfiable (n >= 3)", pairs)
    r.check("3-CNF projection equals h at d=2", projection_matches_h(2))
    tri = Graph(3, 2, ((1, 2), (1, 3), (2, 3)))
    f, occ = csp_to_3cnf(build_fn(tri))
    r.check("triangle 3-CNF unsatisfiable", brute_force_sat(f) is None,
            f"{f.var_count} variables, {f.m} clauses, occurrence {occ}")
    return r


# -- tester ---------------------------------------------------------------------------

def _yes_family(s: int) -> Hypergraph:
    return yes_bounded_tw_family(60, s)[0]


def tester_suite(yes_runs: int = 10 ** 4, far_seeds: int = 100,
                 seed: int = 0) -> SuiteResult:
    from .oracle import HypergraphOracle
    from .testers import TesterConfig, ball_tester_kpartite, run_trials
    r = SuiteResult("tester")
    yes_cfg = TesterConfig(0.25)
    reps = run_trials(_yes_family, yes_cfg, yes_runs, seed)
    rej = sum(x.verdict == "reject" for x in reps)
    r.check("perfect completeness", rej == 0,
            f"{rej} rejections in {yes_runs} runs, epsilon {yes_cfg.epsilon}")
    cfg = TesterConfig(0.05)
    far = far_bounded_tw_family(120)
    dist = distance_to_property(far, PropertySpec("k-partite"))
    r.check("far family distance 1/6", dist == Fraction(1, 6), str(dist))
    a = [ball_tester_kpartite(HypergraphOracle(far), 120, cfg, s)
         for s in range(far_seeds)]
    big = far_bounded_tw_family(480)
    b = [ball_tester_kpartite(HypergraphOracle(big), 480, cfg, s)
         for s in range(far_seeds)]
    freq = Fraction(sum(x.verdict == "reject" for x in a), far_seeds)
    r.check("rejection frequency >= 2/3 at epsilon 0.05", freq >= Fraction(2, 3),
            f"{freq}")
    qa = sorted(x.queries_used for x in a)
    qb = sorted(x.queries_used for x in b)
    r.check("query counts equal for n=120 and n=480", qa == qb,
            f"min {qa[0]}, max {qa[-1]}")
    return r


SUITES = {
    "gadgets": gadget_suite,
    "reductions": reduction_suite,
    "gaps": gap_suite,
    "locality": locality_suite,
    "appendix-b-stats": appendix_b_suite,
    "soundness": soundness_suite,
    "construction": construction_suite,
    "tester": tester_suite,
}


# -- determinism and documented command-line examples ------------------------------

def run_cli(argv: list[str], stdin: str = "") -> tuple[int, str, str]:
    """Run the command line in-process; returns (exit code, stdout, stderr)."""
    import contextlib
    import io
    import sys
    from .cli import main
    out, err = io.StringIO(), io.StringIO()
    old = sys.stdin
    sys.stdin = io.StringIO(stdin)
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            code = main(argv)
    finally:
        sys.stdin = old
    return code, out.getvalue(), err.getvalue()


def _digest(text: str) -> str:
    import hashlib
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def determinism_suite(workdir: str | None = None) -> SuiteResult:
    import os
    import tempfile
    from .core import parse_instance
    r = SuiteResult("determinism")
    tmp = tempfile.TemporaryDirectory() if workdir is None else None
    wd = workdir or tmp.name
    path = lambda name: os.path.join(wd, name)

    def save(name: str, text: str) -> str:
        with open(path(name), "w") as fh:
            fh.write(text)
        return path(name)

    runs = [
        ["gen", "appendix-b", "--n", "30", "--d", "3", "--seed", "7"],
        ["gen", "expander", "--n", "20", "--d", "3", "--seed", "1",
         "--ratio", "1/2"],
        ["gen", "fn-csp", "--n", "4", "--d", "3", "--seed", "0"],
        ["gen", "yes-tw", "--n", "60", "--seed", "5"],
        ["gen", "far-tw", "--n", "40"],
        ["gen", "hard-pipeline", "--n", "3", "--seed", "0",
         "--target", "3partite-hypergraph"],
    ]
    outs = {}
    for argv in runs:
        a, b = run_cli(argv), run_cli(argv)
        outs[argv[1]] = a[1]
        r.check("byte-identical: " + " ".join(argv), a == b and a[0] == 0,
                _digest(a[1]))
    h = parse_instance(outs["appendix-b"])
    r.check("appendix-b n=30 has every degree 3",
            h.n == 30 and set(h.degrees()[1:]) == {3})
    r.check("expander at ratio 1 on 20 vertices exits 2",
            run_cli(["gen", "expander", "--n", "20", "--d", "3"])[0] == 2)
    r.check("appendix-b n=31 exits 2",
            run_cli(["gen", "appendix-b", "--n", "31", "--d", "3"])[0] == 2)
    far = save("far.hgr", outs["far-tw"])
    code, text, _ = run_cli(["solve", "k-partite", "--distance", far])
    r.check("far-tw n=40 distance", text == "distance=1/6\n", text.strip())
    k3 = save("k3.gr", "p gr 3 2 3\n1 2\n1 3\n2 3\n")
    code, text, _ = run_cli(["reduce", "three-par", k3])
    r.check("reduce three-par on K3", code == 0 and text ==
            "p hgr 3 9 2 3\n1 2 4\n1 3 5\n2 3 7\n", text.replace("\n", "; "))
    code, text, trace = run_cli(["reduce", "three-par", k3, "--adapter",
                                 "--trace", "-"], "4 1\n")
    base = [ln for ln in trace.splitlines() if ln.startswith("Q base")]
    r.check("adapter query 4 1", text == "1 2 4\n" and len(base) == 1,
            f"{text.strip()!r}, {len(base)} base query")
    k4 = save("k4.hgr", "p hgr 3 4 3 4\n1 2 3\n1 2 4\n1 3 4\n2 3 4\n")
    one = save("one.hgr", "p hgr 3 3 1 1\n1 2 3\n")
    r.check("solve k-partite K4 exits 1",
            run_cli(["solve", "k-partite", k4])[0] == 1)
    code, text, _ = run_cli(["solve", "k-partite", one])
    r.check("solve k-partite single edge exits 0 with witness",
            code == 0 and "s col 3 3" in text)
    rind = save("rind.hgr", run_cli(["reduce", "ind", one])[1])
    code, text, _ = run_cli(["solve", "independence", "--distance", rind,
                             "--threshold", "3"])
    r.check("independence distance printed", text.startswith("distance="),
            text.strip())
    yes = save("yes.hgr", outs["yes-tw"])
    t1 = run_cli(["test", yes, "--epsilon", "0.1", "--seed", "3"])
    t2 = run_cli(["test", yes, "--epsilon", "0.1", "--seed", "3"])
    r.check("tester on YES instance accepts, byte-identical",
            t1 == t2 and t1[0] == 0)
    t1 = run_cli(["test", far, "--epsilon", "0.05", "--trials", "20"])
    t2 = run_cli(["test", far, "--epsilon", "0.05", "--trials", "20"])
    r.check("tester trial summary byte-identical", t1 == t2 and t1[0] == 1)
    bad = save("bad.hgr", "p hgr 3 2 1\n1 2 x\n")
    r.check("malformed file exits 2", run_cli(["test", bad])[0] == 2)
    man = save("pipe.txt", outs["hard-pipeline"])
    code, text, _ = run_cli(["gen", "hard-pipeline", "--replay", man])
    r.check("pipeline manifest replay", code == 0
            and text == outs["hard-pipeline"])
    from .generators import hard_instance_pipeline, replay_manifest
    full = hard_instance_pipeline(3, "3col-hypergraph", 0).text()
    again = replay_manifest(full).text()
    r.check("materialized pipeline replay", full == again, _digest(full))
    if tmp is not None:
        tmp.cleanup()
    return r


SUITES["determinism"] = determinism_suite
ALL_SUITES = SUITES
