"""Instance factories: expanders, the random triple-partition model, the
arc-counting CSP family, and bounded-treewidth YES / far families."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, sqrt
from typing import Sequence

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import eigsh

from .cnf import CnfFormula, regularize, to_exact_three
from .core import (CapacityError, DomainError, Graph, Hypergraph,
                   complete_hypergraph, disjoint_union, format_graph,
                   format_hypergraph)

EXHAUSTIVE_LIMIT = 20


class GenerationError(RuntimeError):
    """A sampler ran out of its resampling budget."""


# -- expanders -----------------------------------------------------------------

@dataclass(frozen=True)
class ExpanderGraph:
    graph: Graph
    degree: int
    certificate: str  # exhaustive | spectral-heuristic | unverified
    seed: int


def neighbor_masks(g: Graph) -> list[int]:
    masks = [0] * g.n
    for u, v in g.edges:
        masks[u - 1] |= 1 << (v - 1)
        masks[v - 1] |= 1 << (u - 1)
    return masks


def _popcount(a: np.ndarray) -> np.ndarray:
    a = a.astype(np.uint32)
    out = np.zeros(a.shape, dtype=np.int64)
    while a.any():
        out += (a & 1).astype(np.int64)
        a >>= 1
    return out


def expansion_ok(g: Graph, ratio: Fraction = Fraction(1)) -> bool:
    """Exhaustive check: every S with 1 <= |S| <= n/2 has at least
    ratio * |S| outside neighbors."""
    n = g.n
    if n > EXHAUSTIVE_LIMIT:
        raise CapacityError(f"exhaustive expansion check limited to n <= "
                            f"{EXHAUSTIVE_LIMIT}")
    masks = neighbor_masks(g)
    union = np.zeros(1 << n, dtype=np.uint32)
    for i in range(n):
        half = 1 << i
        union[half:2 * half] = union[:half] | masks[i]
    sets = np.arange(1 << n, dtype=np.uint32)
    size = _popcount(sets)
    boundary = _popcount(union & ~sets)
    mask = (size >= 1) & (size <= n // 2)
    ratio = Fraction(ratio)
    lhs = boundary[mask] * ratio.denominator
    return bool(np.all(lhs >= size[mask] * ratio.numerator))


def expansion_impossible(n: int, d: int, ratio: Fraction = Fraction(1)
                         ) -> bool:
    """True when no d-regular graph on n vertices can pass expansion_ok.

    If n - n//2 >= d + 1, some S of size n//2 avoids a closed neighborhood
    N[v], so v is not in N(S) and |N(S)| <= n - n//2 - 1.
    """
    s = n // 2
    return n - s >= d + 1 and (n - s - 1) < Fraction(ratio) * s


def spectral_ok(g: Graph, d: int) -> bool:
    """Second adjacency eigenvalue at most 2 sqrt(d-1) + 0.5 (implies
    connectivity for d-regular graphs)."""
    rows = [u - 1 for u, v in g.edges] + [v - 1 for u, v in g.edges]
    cols = [v - 1 for u, v in g.edges] + [u - 1 for u, v in g.edges]
    a = sparse.csr_matrix((np.ones(len(rows)), (rows, cols)), (g.n, g.n))
    if g.n <= 400:
        ev = np.linalg.eigvalsh(a.toarray())
    else:
        ev = np.sort(eigsh(a, k=2, which="LA", return_eigenvectors=False,
                           v0=np.ones(g.n) / sqrt(g.n) + 0.01 *
                           np.arange(g.n) / g.n))
    return bool(ev[-2] <= 2 * sqrt(d - 1) + 0.5)


def pairing_graph(n: int, d: int, rng: random.Random) -> Graph | None:
    """One draw of the pairing model; None on a loop or repeated edge."""
    points = [v for v in range(1, n + 1) for _ in range(d)]
    rng.shuffle(points)
    edges = set()
    for i in range(0, len(points), 2):
        u, v = points[i], points[i + 1]
        if u == v or (min(u, v), max(u, v)) in edges:
            return None
        edges.add((min(u, v), max(u, v)))
    return Graph(n, d, tuple(sorted(edges)))


def random_regular_expander(n: int, d: int, seed: int,
                            max_tries: int = 10000,
                            ratio: Fraction = Fraction(1)) -> ExpanderGraph:
    """Seeded d-regular simple graph that passes expansion verification
    (exhaustive for n <= 20, spectral otherwise)."""
    if n * d % 2 or n <= d:
        raise DomainError("need n*d even and n > d")
    if n <= EXHAUSTIVE_LIMIT and expansion_impossible(n, d, ratio):
        raise GenerationError(
            f"no d-regular graph on {n} vertices has expansion ratio {ratio}")
    rng = random.Random(seed)
    for _ in range(max_tries):
        g = pairing_graph(n, d, rng)
        if g is None:
            continue
        if n <= EXHAUSTIVE_LIMIT:
            if expansion_ok(g, ratio):
                return ExpanderGraph(g, d, "exhaustive", seed)
        elif spectral_ok(g, d):
            return ExpanderGraph(g, d, "spectral-heuristic", seed)
    raise GenerationError(f"no ({n},{d}) expander after {max_tries} draws")


def all_regular_graphs(n: int, d: int):
    """Every labeled d-regular simple graph on n vertices (small n only)."""
    if n * d % 2 or d >= n:
        return

    def rec(edges, deg):
        u = next((v for v in range(1, n + 1) if deg[v] < d), None)
        if u is None:
            yield Graph(n, d, tuple(sorted(edges)))
            return
        # vertices below u are saturated, so u's missing edges go upward
        cand = [v for v in range(u + 1, n + 1) if deg[v] < d]
        for pick in combinations(cand, d - deg[u]):
            for v in pick:
                deg[v] += 1
            deg[u] = d
            yield from rec(edges + [(u, v) for v in pick], deg)
            deg[u] -= len(pick)
            for v in pick:
                deg[v] -= 1

    yield from rec([], [0] * (n + 1))


# -- the random triple-partition model --------------------------------------------

def sample_appendix_b(n: int, d: int, seed: int) -> Hypergraph:
    """Union of d independent uniform partitions of [n] into triples."""
    if n % 3:
        raise DomainError(f"n = {n} is not divisible by 3")
    rng = random.Random(seed)
    edges = []
    for _ in range(d):
        perm = list(range(1, n + 1))
        rng.shuffle(perm)
        edges += [tuple(sorted(perm[i:i + 3])) for i in range(0, n, 3)]
    return Hypergraph(3, n, max(1, d), tuple(edges), True)


def appendix_b_batch(n: int, d: int, samples: int, seed: int) -> np.ndarray:
    """samples x (d n / 3) x 3 array of sorted triples (0-based vertices)."""
    if n % 3:
        raise DomainError(f"n = {n} is not divisible by 3")
    rng = np.random.default_rng(seed)
    perms = rng.permuted(np.tile(np.arange(n), (samples * d, 1)), axis=1)
    trip = perms.reshape(samples, d * n // 3, 3)
    return np.sort(trip, axis=2)


def multi_edge_rate(n: int, d: int, samples: int, seed: int,
                    chunk: int = 2000) -> float:
    """Fraction of samples containing some repeated triple."""
    hits = 0
    done = 0
    sub = 0
    while done < samples:
        s = min(chunk, samples - done)
        t = appendix_b_batch(n, d, s, seed * 1000003 + sub)
        code = (t[..., 0] * n + t[..., 1]) * n + t[..., 2]
        code.sort(axis=1)
        hits += int(np.any(code[:, 1:] == code[:, :-1], axis=1).sum())
        done += s
        sub += 1
    return hits / samples


def edges_inside_counts(n: int, d: int, subset: Sequence[int], samples: int,
                        seed: int) -> np.ndarray:
    """Per sample, the number of hyperedges entirely inside subset
    (0-based vertex ids)."""
    t = appendix_b_batch(n, d, samples, seed)
    inside = np.isin(t, np.asarray(subset)).all(axis=2)
    return inside.sum(axis=1)


def expected_inside(n: int, d: int, s: int) -> Fraction:
    """d * C(s,3) / C(n-1,2): expected hyperedges inside a fixed s-set."""
    return Fraction(d * comb(s, 3), comb(n - 1, 2))


def densest_subset_search(h: Hypergraph, max_size: int, rng: random.Random,
                          restarts: int = 20) -> tuple[int, list[int]]:
    """Randomized greedy search for a vertex set S, |S| <= max_size, with
    many hyperedges inside. Returns (max edges-inside minus |S|, S)."""
    inc = h.incidence()
    best, best_s = -10 ** 9, []
    for _ in range(restarts):
        e = h.edges[rng.randrange(h.m)]
        s = set(e)
        while True:
            inside = sum(1 for x in h.edges if set(x) <= s)
            if inside - len(s) > best:
                best, best_s = inside - len(s), sorted(s)
            if len(s) >= max_size:
                break
            cand = {}
            for v in s:
                for idx in inc[v]:
                    for w in h.edges[idx]:
                        if w not in s:
                            cand[w] = cand.get(w, 0) + 1
            if not cand:
                break
            top = max(cand.values())
            s.add(rng.choice(sorted(w for w, c in cand.items() if c == top)))
    return best, best_s


# -- the arc-counting CSP --------------------------------------------------------

def h_eval(x: Sequence[int], y: Sequence[int]) -> bool:
    """True iff sum(x) = sum(y) + 1."""
    if len(x) != len(y):
        raise DomainError("h needs inputs of equal length")
    return sum(x) == sum(y) + 1


@dataclass(frozen=True)
class CspInstance:
    """One h-constraint per vertex over arc variables.

    Edge e (0-based, global order) = (i, j), i < j, owns variable 2e+1 for the
    arc i -> j and 2e+2 for j -> i. Constraint v reads x = its outgoing arcs
    and y = its incoming arcs, both ordered by incident-edge order.
    """

    n: int
    d: int
    arcs: tuple[tuple[int, int], ...]
    constraints: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]

    @property
    def var_count(self) -> int:
        return len(self.arcs)

    def satisfied(self, a: Sequence[int]) -> int:
        """a[i-1] is the value of variable i."""
        return sum(h_eval([a[i - 1] for i in x], [a[i - 1] for i in y])
                   for x, y in self.constraints)


def build_fn(expander: ExpanderGraph | Graph) -> CspInstance:
    g = expander.graph if isinstance(expander, ExpanderGraph) else expander
    d = g.max_degree()
    arcs = []
    out_arcs = [[] for _ in range(g.n + 1)]
    in_arcs = [[] for _ in range(g.n + 1)]
    for e, (i, j) in enumerate(g.edges):
        arcs += [(i, j), (j, i)]
        out_arcs[i].append(2 * e + 1)
        in_arcs[j].append(2 * e + 1)
        out_arcs[j].append(2 * e + 2)
        in_arcs[i].append(2 * e + 2)
    cons = tuple((tuple(out_arcs[v]), tuple(in_arcs[v]))
                 for v in range(1, g.n + 1))
    return CspInstance(g.n, d, tuple(arcs), cons)


def csp_assignments_ok(csp: CspInstance, which: Sequence[int] | None = None,
                       chunk: int = 1 << 16):
    """Whether some assignment satisfies every constraint listed in `which`
    (default all), by exhaustive enumeration over the variables they read."""
    which = range(csp.n) if which is None else which
    used = sorted({i for c in which for part in csp.constraints[c] for i in part})
    if len(used) > 24:
        raise CapacityError(f"{len(used)} variables exceeds limit 24")
    col = {v: t for t, v in enumerate(used)}
    total = 1 << len(used)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        ok = np.ones(idx.shape, dtype=bool)
        for c in which:
            x, y = csp.constraints[c]
            sx = sum((idx >> col[i]) & 1 for i in x)
            sy = sum((idx >> col[i]) & 1 for i in y)
            ok &= sx == sy + 1
        if ok.any():
            return True
    return False


def _counter_clauses(inputs: Sequence[int], nxt: int):
    """Unary prefix counters c(i, t) <-> (x_1 + .. + x_i >= t), t <= i.

    Returns (clauses, top, next_free) where top[t] is the variable for
    sum >= t over all inputs."""
    clauses = []
    prev: dict[int, int] = {}
    for i, x in enumerate(inputs, 1):
        cur = {}
        for t in range(1, i + 1):
            c = nxt
            nxt += 1
            a = prev.get(t)          # None means constant false
            b = prev.get(t - 1)      # None with t = 1 means constant true
            if a is not None:
                clauses.append((-a, c))
            clauses.append((-x, c) if t == 1 else (-b, -x, c))
            if t > 1:
                clauses.append((-c, b) if a is None else (-c, a, b))
            clauses.append((-c, x) if a is None else (-c, a, x))
            cur[t] = c
        prev = cur
    return clauses, prev, nxt


def csp_to_3cnf(csp: CspInstance) -> tuple[CnfFormula, int]:
    """Encode each h-constraint with unary counters over its x and y inputs.

    sum(x) = sum(y) + 1 holds iff [sum x >= 1], not [sum y >= d], and
    [sum y >= t] <-> [sum x >= t + 1] for t = 1..d-1. Arc variables keep
    their numbers; counters follow constraint by constraint. Returns the
    formula and its maximum literal occurrence.
    """
    if csp.d > 4:
        raise CapacityError(f"encoding supports d <= 4, got {csp.d}")
    nxt = csp.var_count + 1
    clauses = []
    for x, y in csp.constraints:
        d = len(x)
        cx, topx, nxt = _counter_clauses(x, nxt)
        cy, topy, nxt = _counter_clauses(y, nxt)
        clauses += cx + cy
        clauses.append((topx[1],))
        clauses.append((-topy[d],))
        for t in range(1, d):
            clauses += [(-topy[t], topx[t + 1]), (topy[t], -topx[t + 1])]
    f = CnfFormula(nxt - 1, tuple(clauses))
    return f, f.max_occurrence()


# -- bounded-treewidth families ---------------------------------------------------

def far_bounded_tw_family(n: int) -> Hypergraph:
    """n/4 disjoint copies of the complete 3-uniform hypergraph on 4
    vertices."""
    if n % 4 or n <= 0:
        raise DomainError(f"n = {n} must be a positive multiple of 4")
    return disjoint_union([complete_hypergraph(3, 4)] * (n // 4))


def yes_bounded_tw_family(n: int, seed: int, max_children: int = 2
                          ) -> tuple[Hypergraph, tuple[int, ...]]:
    """Random 3-partite hypergraph whose hyperedges live in the bags
    {t, parent(t), grandparent(t)} of a random rooted tree.

    A 3-partition is drawn first; vertex t prefers a parent that makes its
    bag rainbow and only rainbow bags become hyperedges. Bags of a rooted
    tree chained child to parent form a tree decomposition of width 2.
    Returns the hypergraph and the witness partition (colors 1..3).
    """
    if n < 3:
        raise DomainError("need n >= 3")
    rng = random.Random(seed)
    color = [0] + [rng.randint(1, 3) for _ in range(n)]
    parent = [0] * (n + 1)
    kids = [0] * (n + 1)
    edges = []
    for t in range(2, n + 1):
        open_ = [p for p in range(1, t) if kids[p] < max_children]
        good = [p for p in open_ if parent[p] and
                len({color[t], color[p], color[parent[p]]}) == 3]
        p = rng.choice(good or open_)
        parent[t] = p
        kids[p] += 1
        if parent[p] and len({color[t], color[p], color[parent[p]]}) == 3:
            edges.append(tuple(sorted((t, p, parent[p]))))
    delta = 1 + max_children + max_children ** 2
    return Hypergraph(3, n, delta, tuple(edges)), tuple(color[1:])


# -- composed hard instances -------------------------------------------------------

TARGETS = ("3col-hypergraph", "3partite-hypergraph", "ind-number")
MATERIALIZE_LIMIT = 2_000_000


@dataclass(frozen=True)
class PipelineResult:
    """Manifest plus the composed instance. When the instance would exceed
    MATERIALIZE_LIMIT vertices it is None and only `oracle()` is usable."""

    manifest: tuple[tuple[str, str], ...]
    instance: Hypergraph | Graph | None
    formula: CnfFormula
    expander: Graph
    target: str

    def text(self) -> str:
        head = "".join(f"c {k}={v}\n" for k, v in self.manifest)
        if self.instance is None:
            return head
        body = (format_hypergraph(self.instance)
                if isinstance(self.instance, Hypergraph)
                else format_graph(self.instance))
        return head + body

    def oracle(self, trace=None):
        """The composed instance as a stack of lazy adapters over the
        formula's occurrence oracle."""
        from .oracle import CnfOracle
        from .reductions import make_local_adapter
        d = self.formula.max_occurrence()
        o = make_local_adapter("rho_3col", CnfOracle(self.formula, d, trace),
                               {"expander": self.expander}, trace)
        if self.target != "3col-hypergraph":
            o = make_local_adapter("rho_par_tw", o, trace=trace)
            o = make_local_adapter("rho_3par", o, trace=trace)
        if self.target == "ind-number":
            o = make_local_adapter("rho_ind", o, trace=trace)
        return o


def hard_instance_pipeline(n: int = 3, target: str = "3col-hypergraph",
                           seed: int = 0, d: int | None = None,
                           pool_degree: int = 3) -> PipelineResult:
    """Expander -> arc CSP -> 3-CNF -> exact 3-CNF -> regular 3-CNF ->
    coloring hypergraph, then the primal graph, rho_3par and rho_ind as the
    target requires. Every stage parameter is recorded in the manifest."""
    from .reductions import (ColLayout, build_rho_kcol, default_expander,
                             rho_3par, rho_ind, rho_par_tw)
    if target not in TARGETS:
        raise DomainError(f"unknown target {target!r}")
    d = d or n - 1
    man = [("tool", "bdhyper"), ("target", target), ("stage", "expander"),
           ("seed", str(seed)), ("n", str(n)), ("d", str(d))]
    exp = random_regular_expander(n, d, seed)
    man.append(("certificate", exp.certificate))
    csp = build_fn(exp)
    man += [("stage", "csp"), ("variables", str(csp.var_count)),
            ("constraints", str(csp.n))]
    f, occ = csp_to_3cnf(csp)
    man += [("stage", "cnf"), ("cnf_vars", str(f.var_count)),
            ("cnf_clauses", str(f.m)), ("occurrence", str(occ))]
    f3r, c = regularize(to_exact_three(f), seed)
    man += [("stage", "regular"), ("seed", str(seed)),
            ("cnf_vars", str(f3r.var_count)), ("d_sat", str(c))]
    P = 8 * c * f3r.var_count
    pool = default_expander(P, seed, pool_degree)
    lay = ColLayout(3, f3r.var_count, c, pool)
    man += [("stage", "rho_3col"), ("pool_size", str(P)),
            ("pool_degree", str(pool_degree)), ("seed", str(seed)),
            ("n", str(lay.N)), ("delta", str(lay.delta))]
    size, delta = lay.N, lay.delta
    if target != "3col-hypergraph":
        delta = 2 * delta
        man += [("stage", "rho_par_tw"), ("n", str(size)),
                ("delta", str(delta))]
        size = size + delta * size
        man += [("stage", "rho_3par"), ("n", str(size)),
                ("delta", str(delta))]
    if target == "ind-number":
        size, delta = 3 * size, delta + 1
        man += [("stage", "rho_ind"), ("n", str(size)),
                ("delta", str(delta))]
    inst: Hypergraph | Graph | None = None
    if size <= MATERIALIZE_LIMIT:
        inst = build_rho_kcol(f3r, 3, pool).hypergraph
        if target != "3col-hypergraph":
            inst = rho_3par(rho_par_tw(inst), delta)
        if target == "ind-number":
            inst = rho_ind(inst)
    man.append(("materialized", "yes" if inst is not None else "no"))
    return PipelineResult(tuple(man), inst, f3r, pool, target)


def parse_manifest(text: str) -> list[tuple[str, str]]:
    out = []
    for line in text.splitlines():
        if line.startswith("c ") and "=" in line:
            k, v = line[2:].split("=", 1)
            out.append((k.strip(), v.strip()))
    return out


def replay_manifest(text: str) -> PipelineResult:
    """Rerun the pipeline from the manifest header of a pipeline output."""
    man = parse_manifest(text)
    first = {}
    for k, v in man:
        first.setdefault(k, v)
    return hard_instance_pipeline(int(first["n"]), first["target"],
                                  int(first["seed"]), int(first["d"]))
