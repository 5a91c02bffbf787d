"""One-sided k-partiteness tester and measurement harnesses.

The tester explores radius-bounded balls of the Gaifman graph and
rejects only with a ball whose induced subhypergraph is certified
non-k-partite, so k-partite inputs are always accepted.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .core import BOTTOM, CapacityError, DomainError, Hypergraph
from .oracle import HypergraphOracle
from .solvers import is_k_partite

BALL_SOLVER_BUDGET = 10 ** 6


class TesterError(RuntimeError):
    """A ball could not be decided within budget; never a verdict."""


def derive_seed(seed: int, index: int) -> int:
    """Sub-seed of trial `index`: first 8 bytes of sha256("seed/index")."""
    digest = hashlib.sha256(f"{seed}/{index}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


@dataclass(frozen=True)
class TesterConfig:
    epsilon: float
    sample_count: int | None = None
    radius: int = 2
    ball_budget: int = 64

    def __post_init__(self):
        if not 0 < self.epsilon < 1:
            raise DomainError(f"epsilon {self.epsilon} outside (0, 1)")
        if self.sample_count is None:
            object.__setattr__(self, "sample_count",
                               math.ceil(8 / self.epsilon))
        if min(self.sample_count, self.radius, self.ball_budget) < 1:
            raise DomainError("sample_count, radius and ball_budget must be positive")


@dataclass(frozen=True)
class Ball:
    start: int
    size: int
    verdict: str  # "ok", "truncated" or "not-partite"
    vertices: tuple[int, ...] = ()
    edges: tuple[tuple[int, ...], ...] = ()


@dataclass
class TesterReport:
    verdict: str
    queries_used: int
    seed: int
    cfg: TesterConfig
    balls: list[Ball] = field(default_factory=list)

    def text(self) -> str:
        c = self.cfg
        lines = [f"verdict={self.verdict}", f"queries={self.queries_used}",
                 f"seed={self.seed}", f"epsilon={c.epsilon}",
                 f"sample_count={c.sample_count}", f"radius={c.radius}",
                 f"ball_budget={c.ball_budget}"]
        lines += [f"ball start={b.start} size={b.size} local={b.verdict}"
                  for b in self.balls]
        return "\n".join(lines) + "\n"

    def witness(self) -> Hypergraph | None:
        """Induced subhypergraph of the first rejecting ball, relabeled."""
        for b in self.balls:
            if b.verdict == "not-partite":
                return _relabel(b.vertices, b.edges, self.cfg, 3)
        return None


def _relabel(verts, edges, cfg, k) -> Hypergraph:
    name = {v: i for i, v in enumerate(verts, 1)}
    es = tuple(tuple(sorted(name[v] for v in e)) for e in edges)
    deg = max([sum(1 for e in es if v in e) for v in range(1, len(verts) + 1)]
              or [1])
    return Hypergraph(k, len(verts), max(deg, 1), es,
                      allows_multi=len(set(es)) < len(es))


def _explore(o, start: int, cfg: TesterConfig, k: int) -> Ball:
    """BFS in the Gaifman graph to cfg.radius. Each ball vertex's base row
    is read once and serves both its neighbors and the induced edges."""
    ball = {start: 0}
    rows: dict[int, list] = {}
    order = [start]
    frontier = [start]
    for dist in range(1, cfg.radius + 1):
        nxt = []
        for v in frontier:
            rows[v] = [e for e in o.row(v) if e is not BOTTOM]
            for w in sorted({x for e in rows[v] for x in e} - {v}):
                if w not in ball:
                    if len(ball) == cfg.ball_budget:
                        return Ball(start, len(ball), "truncated")
                    ball[w] = dist
                    order.append(w)
                    nxt.append(w)
        frontier = nxt
    inside = set()
    for v in order:
        if v not in rows:
            rows[v] = [e for e in o.row(v) if e is not BOTTOM]
        for e in rows[v]:
            if all(x in ball for x in e):
                inside.add(tuple(e))
    verts = tuple(sorted(order))
    edges = tuple(sorted(inside))
    sub = _relabel(verts, edges, None, k)
    try:
        ok = is_k_partite(sub, BALL_SOLVER_BUDGET) is not None
    except CapacityError as exc:
        raise TesterError(f"ball at {start}: {exc}") from None
    return Ball(start, len(ball), "ok" if ok else "not-partite", verts, edges)


def ball_tester_kpartite(o, n: int, cfg: TesterConfig, seed: int
                         ) -> TesterReport:
    """Sample cfg.sample_count start vertices, explore each ball in the
    Gaifman graph and reject iff some ball's induced subhypergraph is not
    k-partite. Truncated balls accept. Queries are counted at the base."""
    if n != o.n:
        raise DomainError(f"n = {n} but the oracle has {o.n} vertices")
    k = getattr(o, "k", 3)
    rng = random.Random(seed)
    before = o.snapshot_count()
    balls = []
    for _ in range(cfg.sample_count):
        b = _explore(o, rng.randint(1, n), cfg, k)
        balls.append(b)
        if b.verdict == "not-partite":
            break
    verdict = "reject" if balls[-1].verdict == "not-partite" else "accept"
    return TesterReport(verdict, o.snapshot_count() - before, seed, cfg, balls)


def run_trials(family: Callable[[int], Hypergraph], cfg: TesterConfig,
               trials: int, seed: int) -> list[TesterReport]:
    """Trial i draws its instance and tester randomness from
    derive_seed(seed, i); reports come back sorted by trial index."""
    if trials < 1:
        raise DomainError("trials must be at least 1")
    out = []
    for i in range(trials):
        s = derive_seed(seed, i)
        h = family(s)
        out.append(ball_tester_kpartite(HypergraphOracle(h), h.n, cfg, s))
    return out


def estimate_acceptance(family: Callable[[int], Hypergraph],
                        cfg: TesterConfig, trials: int, seed: int
                        ) -> tuple[Fraction, float]:
    """Empirical acceptance frequency and its binomial standard error."""
    reports = run_trials(family, cfg, trials, seed)
    acc = Fraction(sum(r.verdict == "accept" for r in reports), trials)
    p = float(acc)
    return acc, math.sqrt(p * (1 - p) / trials)


# -- locality ------------------------------------------------------------------------

LOCALITY_KINDS = ("rho_3col", "rho_3par", "rho_par_tw", "rho_ind")


def _base_for(kind: str, n: int, seed: int):
    from .cnf import random_kc_formula
    from .generators import random_regular_expander, sample_appendix_b
    from .oracle import CnfOracle, GraphOracle
    if kind == "rho_3par":
        g = random_regular_expander(n, 3, seed, ratio=Fraction(0)).graph
        return GraphOracle(g)
    if kind in ("rho_par_tw", "rho_ind"):
        return HypergraphOracle(sample_appendix_b(n, 3, seed))
    if kind == "rho_3col":
        f = random_kc_formula(n, 3, seed)
        return CnfOracle(f, 3)
    raise DomainError(f"unknown adapter kind {kind!r}")


def _workload(adapter, rng: random.Random, count: int) -> list[int]:
    """Random vertices plus, for rho_3col, one vertex per layout region."""
    verts = [rng.randint(1, adapter.n) for _ in range(count)]
    lay = getattr(adapter, "lay", None)
    if lay is not None:
        reps = list(range(1, lay.L + 1, lay.L // 4 or 1))
        reps += [lay.pool(c, 1) for c in range(lay.k)]
        for fam in lay.count:
            if lay.count[fam] and lay.aux_per[fam]:
                reps.append(lay.aux_start(fam, 0) + 1)
        verts += reps
    return verts


def measure_locality(kind: str, sizes: list[int], seed: int = 0,
                     count: int = 100) -> dict:
    """Max base queries per adapter query over a seeded workload of full
    rows, for each base size n. 'equal' says whether the max agrees across
    all sizes; for rho_3par 'apex' is the max over apex queries alone."""
    from .reductions import make_local_adapter
    if len(sizes) < 2:
        raise DomainError("need at least two sizes")
    table = {}
    apex = {}
    for n in sizes:
        base = _base_for(kind, n, seed)
        ad = make_local_adapter(kind, base, {"seed": seed})
        rng = random.Random(derive_seed(seed, n))
        worst, worst_apex = 0, 0
        for v in _workload(ad, rng, count):
            for j in range(1, ad.delta + 1):
                before = ad.base_count()
                ad.query(v, j)
                cost = ad.base_count() - before
                worst = max(worst, cost)
                if kind == "rho_3par" and v > base.n:
                    worst_apex = max(worst_apex, cost)
        table[n] = worst
        apex[n] = worst_apex
    res = {"kind": kind, "max": table,
           "equal": len(set(table.values())) == 1}
    if kind == "rho_3par":
        res["apex"] = apex
    return res


def format_locality(rows: list[dict]) -> str:
    sizes = sorted({n for r in rows for n in r["max"]})
    out = ["kind\t" + "\t".join(f"n={n}" for n in sizes) + "\tequal"]
    for r in rows:
        out.append(r["kind"] + "\t" + "\t".join(str(r["max"].get(n, ""))
                                                 for n in sizes)
                   + "\t" + ("yes" if r["equal"] else "no"))
    return "\n".join(out) + "\n"
