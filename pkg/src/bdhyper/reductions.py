"""Local reductions between colorability, partiteness and independence.

Each reduction has a materialized form (a pure function returning the target
instance) and a lazy adapter form (an :class:`~bdhyper.oracle.Oracle` that
answers target queries through a base oracle).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Sequence

from .cnf import CnfFormula, validate_kc
from .core import (BOTTOM, CapacityError, DomainError, Graph, Hypergraph,
                   gaifman)
from .gadgets import (AuxAllocator, GadgetInstance, clause_gadget,
                      equality_gadget, inequality_gadget,
                      not_dummy_gadget, _symmetry_order)
from .oracle import CnfOracle, Oracle


# -- graph to hypergraph -----------------------------------------------------

def _edge_slots(g: Graph) -> list[tuple[int, int, int]]:
    """(u, v, j) per edge in global order, u < v, j = slot of the edge in u's
    row."""
    seen = [0] * (g.n + 1)
    out = []
    for u, v in g.edges:
        seen[u] += 1
        seen[v] += 1
        out.append((u, v, seen[u]))
    return out


def rho_3par(g: Graph, d: int | None = None) -> Hypergraph:
    """Edge (u, v), the j-th edge at u, becomes {u, v, n + (u-1)d + j}."""
    d = d or g.delta_bound
    if g.max_degree() > d:
        raise DomainError(f"graph degree exceeds {d}")
    edges = tuple((u, v, g.n + (u - 1) * d + j) for u, v, j in _edge_slots(g))
    return Hypergraph(3, g.n + d * g.n, d, edges)


def rho_kpar(g: Graph, k: int, d: int | None = None) -> Hypergraph:
    """Edge number e gets apexes n + (k-2)(e-1) + t, t = 1..k-2."""
    if k < 3:
        raise DomainError("rho_kpar needs k >= 3")
    d = d or g.delta_bound
    if g.max_degree() > d:
        raise DomainError(f"graph degree exceeds {d}")
    edges = tuple((u, v, *(g.n + (k - 2) * e + t for t in range(1, k - 1)))
                  for e, (u, v) in enumerate(g.edges))
    return Hypergraph(k, g.n + (k - 2) * g.m, d, edges)


def rho_3par_inverse(h: Hypergraph, n: int, d: int | None = None) -> Graph:
    """Graph on the first n vertices joining u, v when some hyperedge holds
    both."""
    pairs = {}
    for e in h.edges:
        low = [v for v in e if v <= n]
        for p in combinations(low, 2):
            pairs.setdefault(p, None)
    return Graph(n, d or h.delta_bound, tuple(pairs))


def rho_par_tw(h: Hypergraph) -> Graph:
    """The primal graph of h."""
    return gaifman(h)


def ind_vertex(u: int, i: int) -> int:
    return 3 * (u - 1) + i


def rho_ind(h: Hypergraph) -> Hypergraph:
    """Three level copies of every hyperedge plus the vertical triple of each
    vertex, on 3n vertices."""
    if h.k != 3:
        raise DomainError("rho_ind needs a 3-uniform hypergraph")
    edges = [tuple(ind_vertex(u, i) for u in e)
             for e in h.edges for i in (1, 2, 3)]
    edges += [(ind_vertex(u, 1), ind_vertex(u, 2), ind_vertex(u, 3))
              for u in range(1, h.n + 1)]
    return Hypergraph(3, 3 * h.n, h.delta_bound + 1, tuple(edges),
                      h.allows_multi)


# -- CNF to hypergraph coloring ---------------------------------------------

FAMILIES = ("copy_eq", "pool_eq", "lit_ineq", "pool_ineq", "not_dummy",
            "clause")


def _pair_rank(a: int, b: int, size: int) -> int:
    """Rank of the pair a < b (0-based) in lexicographic order over 0..size-1."""
    return a * size - a * (a + 1) // 2 + (b - a - 1)


@dataclass
class ColLayout:
    """Closed-form vertex and gadget numbering of the coloring reduction.

    Literal copies come first, then the k color pools of size P = 8dn, then
    the fresh auxiliary vertices family by family (see FAMILIES).
    """

    k: int
    n: int
    d: int
    expander: Graph
    P: int = field(init=False)
    L: int = field(init=False)
    m: int = field(init=False)

    def __post_init__(self):
        self.L = 4 * self.d * self.n
        self.P = 8 * self.d * self.n
        self.m = 2 * self.d * self.n // 3
        if self.expander.n != self.P:
            raise DomainError(f"expander must have {self.P} vertices")
        self.xdeg = self.expander.max_degree()
        k = self.k
        self.a_eq = k * k - k - 1
        self.a_ineq = 2 * (k - 2) * (1 + self.a_eq)
        self.pairs = list(combinations(range(k), 2))
        self.count = {
            "copy_eq": 2 * self.n * comb(2 * self.d, 2),
            "pool_eq": k * self.expander.m,
            "lit_ineq": self.n * (2 * self.d) ** 2,
            "pool_ineq": self.P * len(self.pairs),
            "not_dummy": self.L,
            "clause": self.m,
        }
        per = {"copy_eq": self.a_eq, "pool_eq": self.a_eq,
               "lit_ineq": self.a_ineq, "pool_ineq": self.a_ineq,
               "not_dummy": 0, "clause": 3}
        self.aux_per = per
        self.start = {}
        nxt = self.L + k * self.P + 1
        for fam in FAMILIES:
            self.start[fam] = nxt
            nxt += self.count[fam] * per[fam]
        self.N = nxt - 1
        self._xrows = self.expander.neighbors()
        self._xinc: list[list[int]] = [[] for _ in range(self.P + 1)]
        for e, (i, j) in enumerate(self.expander.edges):
            self._xinc[i].append(e)
            self._xinc[j].append(e)
        self.delta = self._delta_bound()

    # vertex ids
    def lit_index(self, lit: int) -> int:
        return 2 * (abs(lit) - 1) + (lit < 0)

    def copy(self, lit: int, t: int) -> int:
        return self.lit_index(lit) * 2 * self.d + t

    def pool(self, cls: int, i: int) -> int:
        """cls 0 = T, 1 = F, 1 + r = D_r; i in 1..P."""
        return self.L + cls * self.P + i

    def interface(self) -> range:
        return range(1, self.L + self.k * self.P + 1)

    def search_order(self) -> list[int]:
        """Interface with pools first: one pool decision fixes a class."""
        return (list(range(self.L + 1, self.L + self.k * self.P + 1))
                + list(range(1, self.L + 1)))

    def aux_start(self, fam: str, g: int) -> int:
        return self.start[fam] + g * self.aux_per[fam]

    def locate(self, v: int):
        """('copy', lit, t) | ('pool', cls, i) | ('aux', family, gadget)."""
        if not 1 <= v <= self.N:
            raise DomainError(f"vertex {v} outside 1..{self.N}")
        if v <= self.L:
            li, t = divmod(v - 1, 2 * self.d)
            var, neg = divmod(li, 2)
            return ("copy", -(var + 1) if neg else var + 1, t + 1)
        if v <= self.L + self.k * self.P:
            cls, i = divmod(v - self.L - 1, self.P)
            return ("pool", cls, i + 1)
        for fam in reversed(FAMILIES):
            if self.count[fam] and v >= self.start[fam]:
                return ("aux", fam, (v - self.start[fam]) // self.aux_per[fam])
        raise AssertionError("unreachable")

    # pool picks
    def dummy_groups(self, q: int) -> list[list[int]]:
        """Not-dummy gadget q (0-based copy index): k-1 cyclic D_r vertices
        per dummy class."""
        k, P = self.k, self.P
        return [[self.pool(1 + r, (q * (k - 1) + t) % P + 1)
                 for t in range(k - 1)] for r in range(1, k - 1)]

    def not_dummy_users(self, i: int) -> list[int]:
        """Gadgets q whose dummy groups contain pool index i (any class)."""
        k, P = self.k, self.P
        out = set()
        pos = i - 1
        while pos < self.L * (k - 1):
            out.add(pos // (k - 1))
            pos += P
        return sorted(out)

    def clause_pools(self, c: int):
        """Pool vertices of clause gadget c (1-based): T groups, dummy groups
        for D_2.., false pads, final pad."""
        k = self.k
        base = (c - 1) * 3 * (k - 1)
        t_groups = [[self.pool(0, base + r * (k - 1) + t + 1)
                     for t in range(k - 1)] for r in range(3)]
        dummy = [[[self.pool(1 + s, base + r * (k - 1) + t + 1)
                   for t in range(k - 1)] for s in range(2, k - 1)]
                 for r in range(3)]
        pb = (c - 1) * 3 * (k - 3)
        pads = [[self.pool(1, pb + r * (k - 3) + t + 1) for t in range(k - 3)]
                for r in range(3)]
        final = [self.pool(2, (c - 1) * (k - 3) + t + 1) for t in range(k - 3)]
        return t_groups, dummy, pads, final

    def clause_of_pool(self, cls: int, i: int) -> list[int]:
        """Clause gadgets that use pool vertex (cls, i)."""
        k = self.k
        if cls == 0 or cls >= 3:
            c = (i - 1) // (3 * (k - 1)) + 1
        elif cls == 1:
            c = (i - 1) // (3 * (k - 3)) + 1 if k > 3 else 0
        else:
            c = (i - 1) // (k - 3) + 1 if k > 3 else 0
        return [c] if 1 <= c <= self.m else []

    # gadgets
    def gadget(self, fam: str, g: int, clause_copies=None) -> GadgetInstance:
        """Gadget number g (0-based) of a family. Clause gadgets need
        clause_copies: the three (copy, copy) pairs of the clause."""
        k, d = self.k, self.d
        alloc = AuxAllocator({}, self.aux_start(fam, g))
        if fam == "copy_eq":
            per = comb(2 * d, 2)
            li, r = divmod(g, per)
            a, b = _unrank_pair(r, 2 * d)
            base = li * 2 * d
            return equality_gadget(base + a + 1, base + b + 1, alloc, k)
        if fam == "pool_eq":
            cls, e = divmod(g, self.expander.m)
            i, j = self.expander.edges[e]
            return equality_gadget(self.pool(cls, i), self.pool(cls, j),
                                   alloc, k)
        if fam == "lit_ineq":
            var, r = divmod(g, (2 * d) ** 2)
            tp, tn = divmod(r, 2 * d)
            return inequality_gadget(self.copy(var + 1, tp + 1),
                                     self.copy(-(var + 1), tn + 1), alloc, k)
        if fam == "pool_ineq":
            i, r = divmod(g, len(self.pairs))
            a, b = self.pairs[r]
            return inequality_gadget(self.pool(a, i + 1), self.pool(b, i + 1),
                                     alloc, k)
        if fam == "not_dummy":
            return not_dummy_gadget(g + 1, self.dummy_groups(g), k)
        if fam == "clause":
            t_groups, dummy, pads, final = self.clause_pools(g + 1)
            return clause_gadget(clause_copies, t_groups, alloc, k, dummy,
                                 pads, final)
        raise DomainError(f"unknown family {fam}")

    def _delta_bound(self) -> int:
        k, a = self.k, self.a_eq
        eq_anchor = comb(a, k - 1)
        eq_aux = comb(a + 1, k - 1) - comb(a - 1, k - 3)
        ineq_anchor = (k - 2) * eq_anchor + 2
        copy_deg = ((2 * self.d - 1) * eq_anchor + 2 * self.d * ineq_anchor
                    + (k - 2) + 1)
        nd_uses = -(-self.L * (k - 1) // self.P)
        pool_deg = (self.xdeg * eq_anchor + (k - 1) * ineq_anchor
                    + nd_uses + 1)
        return max(copy_deg, pool_deg, eq_aux, eq_anchor + 1, k)


def _unrank_pair(r: int, size: int) -> tuple[int, int]:
    a = 0
    while r >= size - a - 1:
        r -= size - a - 1
        a += 1
    return a, a + 1 + r


@dataclass(frozen=True)
class ColReduction:
    """Materialized coloring reduction with the layout that produced it."""

    formula: CnfFormula
    layout: ColLayout
    hypergraph: Hypergraph
    gadgets: tuple[GadgetInstance, ...]
    expander_seed: int | None = None

    @property
    def interface(self) -> range:
        return self.layout.interface()


def clause_positions(f: CnfFormula) -> list[dict[int, int]]:
    """For clause c (index c-1): literal -> which occurrence of that literal
    (1-based, in clause order) the clause is."""
    seen: dict[int, int] = {}
    out = []
    for cl in f.clauses:
        pos = {}
        for lit in cl:
            seen[lit] = seen.get(lit, 0) + 1
            pos[lit] = seen[lit]
        out.append(pos)
    return out


def _clause_copies(lay: ColLayout, cl, pos) -> list[tuple[int, int]]:
    return [(lay.copy(lit, 2 * pos[lit] - 1), lay.copy(lit, 2 * pos[lit]))
            for lit in cl]


def default_expander(P: int, seed: int = 0, degree: int = 3) -> Graph:
    """Pool expander used when none is given."""
    from .generators import random_regular_expander
    return random_regular_expander(P, degree, seed).graph


def build_rho_kcol(f: CnfFormula, k: int = 3, expander: Graph | None = None,
                   seed: int = 0) -> ColReduction:
    """The coloring reduction from a regular 3-CNF to a k-uniform hypergraph
    that is weakly k-colorable iff the formula is satisfiable."""
    if k not in (3, 4):
        raise CapacityError(f"coloring reduction supports k in {{3, 4}}, got {k}")
    d = f.max_occurrence()
    if d == 0 or not validate_kc(f, 3, d) or any(len(c) != 3 for c in f.clauses):
        raise DomainError("formula must be an exact (3, d)-CNF")
    P = 8 * d * f.var_count
    xseed = seed if expander is None else None
    expander = expander or default_expander(P, seed)
    lay = ColLayout(k, f.var_count, d, expander)
    positions = clause_positions(f)
    gadgets = []
    for fam in FAMILIES:
        for g in range(lay.count[fam]):
            copies = None
            if fam == "clause":
                copies = _clause_copies(lay, f.clauses[g], positions[g])
            gadgets.append(lay.gadget(fam, g, copies))
    edges = tuple(e for g in gadgets for e in g.hyperedges)
    h = Hypergraph(k, lay.N, lay.delta, edges)
    return ColReduction(f, lay, h, tuple(gadgets), xseed)


def rho_kcol(f: CnfFormula, k: int = 3, expander: Graph | None = None,
             seed: int = 0) -> Hypergraph:
    return build_rho_kcol(f, k, expander, seed).hypergraph


def rho_3col(f: CnfFormula, expander: Graph | None = None,
             seed: int = 0) -> Hypergraph:
    return build_rho_kcol(f, 3, expander, seed).hypergraph


def complete_gadget(g: GadgetInstance, col: dict[int, int], palette: int,
                    cache: dict | None = None) -> bool:
    """Extend col (anchors and pool vertices colored) to g's aux vertices
    without monochromatic hyperedges. Nested parts are completed one at a
    time. Returns False if no extension exists."""
    if cache is not None:
        key = (g.kind, len(g.aux), tuple(col[v] for v in g.anchors + g.pool))
        hit = cache.get(key)
        if hit is not None:
            if hit is False:
                return False
            col.update(zip(g.aux, hit))
            return True
    inner = {x for p in g.parts for x in p.aux}
    own = [x for x in g.aux if x not in inner]
    part_edges = {e for p in g.parts for e in p.hyperedges}
    edges = [e for e in g.hyperedges if e not in part_edges]
    sol = _search_extension(edges, palette, col, own, g.parts, cache,
                            g.hyperedges)
    if cache is not None:
        cache[key] = tuple(col[x] for x in g.aux) if sol else False
    return sol


def _search_extension(edges, palette, col, own, parts, cache,
                      all_edges) -> bool:
    order, tie = _symmetry_order(all_edges, own)
    pos = {v: i for i, v in enumerate(order)}
    closing = [[] for _ in order]
    for e in edges:
        late = [pos[v] for v in e if v in pos]
        if late:
            closing[max(late)].append(e)
        elif len({col[v] for v in e}) == 1:
            return False

    def rec(i):
        if i == len(order):
            done = []
            for p in parts:
                if not complete_gadget(p, col, palette, cache):
                    for x in done:
                        del col[x]
                    return False
                done.extend(p.aux)
            return True
        v = order[i]
        lo = col[order[i - 1]] if tie[i] else 1
        for c in range(lo, palette + 1):
            col[v] = c
            if all(len({col[x] for x in e}) > 1 for e in closing[i]) \
                    and rec(i + 1):
                return True
        del col[v]
        return False

    return rec(0)


def coloring_from_assignment(red: ColReduction, assignment: Sequence[int]
                             ) -> list[int] | None:
    """Color literal copies by the assignment (TRUE = 1, FALSE = 2) and pool
    class c with color c + 1, then complete every gadget. Returns colors
    indexed by vertex (index 0 unused), or None if some gadget cannot be
    completed (the assignment violates a clause)."""
    lay = red.layout
    col: dict[int, int] = {}
    for x in range(1, lay.n + 1):
        val = assignment[x - 1]
        for lit, true in ((x, val == 1), (-x, val == 0)):
            for t in range(1, 2 * lay.d + 1):
                col[lay.copy(lit, t)] = 1 if true else 2
    for cls in range(lay.k):
        for i in range(1, lay.P + 1):
            col[lay.pool(cls, i)] = cls + 1
    cache: dict = {}
    for g in red.gadgets:
        if not complete_gadget(g, col, lay.k, cache):
            return None
    return [0] + [col[v] for v in range(1, lay.N + 1)]


# -- lazy adapters -------------------------------------------------------------

ADAPTER_KINDS = ("rho_3col", "rho_kcol", "rho_3par", "rho_par_tw", "rho_ind")


class LocalAdapter(Oracle):
    """Target-instance oracle whose answers are computed from base queries."""

    def __init__(self, kind: str, base, n: int, delta: int, trace=None):
        super().__init__(n, delta, trace)
        self.kind = kind
        self.layer = kind
        self.base = base

    def base_count(self) -> int:
        return self.base.snapshot_count()


class ThreeParAdapter(LocalAdapter):
    def __init__(self, base, trace=None):
        self.g_n, self.d = base.n, base.delta
        self.k = 3
        super().__init__("rho_3par", base, base.n + base.delta * base.n,
                         base.delta, trace)

    def _answer(self, v, j):
        n, d = self.g_n, self.d
        if v > n:
            if j > 1:
                return BOTTOM
            u, jj = divmod(v - n - 1, d)
            w = self.base.query(u + 1, jj + 1)
            if w is BOTTOM or w < u + 1:
                return BOTTOM
            return (u + 1, w, v)
        w = self.base.query(v, j)
        if w is BOTTOM:
            return BOTTOM
        if v < w:
            return (v, w, n + (v - 1) * d + j)
        row = [self.base.query(w, t) for t in range(1, d + 1)]
        return (w, v, n + (w - 1) * d + row.index(v) + 1)


class ParTwAdapter(LocalAdapter):
    def __init__(self, base, trace=None):
        super().__init__("rho_par_tw", base, base.n,
                         max(1, (base.k - 1) * base.delta), trace)

    def _answer(self, v, j):
        nbrs = set()
        for e in self.base.row(v):
            if e is not BOTTOM:
                nbrs.update(e)
        nbrs.discard(v)
        row = sorted(nbrs)
        return row[j - 1] if j <= len(row) else BOTTOM


class IndAdapter(LocalAdapter):
    def __init__(self, base, trace=None):
        if base.k != 3:
            raise DomainError("rho_ind needs a 3-uniform base")
        super().__init__("rho_ind", base, 3 * base.n, base.delta + 1, trace)

    def _answer(self, v, j):
        u, i = divmod(v - 1, 3)
        u, i = u + 1, i + 1
        vertical = (ind_vertex(u, 1), ind_vertex(u, 2), ind_vertex(u, 3))
        if j <= self.base.delta:
            e = self.base.query(u, j)
            if e is not BOTTOM:
                return tuple(ind_vertex(x, i) for x in e)
        if j == 1 or self.base.query(u, j - 1) is not BOTTOM:
            return vertical
        return BOTTOM


class ColAdapter(LocalAdapter):
    """Lazy coloring reduction over a CnfOracle. Copy vertices and clause
    auxiliaries look up their clause through occurrence queries; every other
    vertex is answered from the layout alone."""

    def __init__(self, base: CnfOracle, expander: Graph, k: int = 3,
                 trace=None):
        self.lay = ColLayout(k, base.n, base.delta, expander)
        self.k = k
        super().__init__("rho_3col" if k == 3 else "rho_kcol", base,
                         self.lay.N, self.lay.delta, trace)

    def _copies(self, c: int, clause, known: dict[int, int]):
        """Copy pairs of clause c. Occurrence lists of literals not in
        `known` are scanned in full (d queries each)."""
        pos = dict(known)
        for lit in clause:
            if lit in pos:
                continue
            for jj in range(1, self.base.delta + 1):
                ans = self.base.query(lit, jj)
                if ans is not BOTTOM and ans[0] == c:
                    pos[lit] = jj
        return _clause_copies(self.lay, clause, pos)

    def _gadgets(self, v):
        lay = self.lay
        kind, a, b = lay.locate(v)
        d2 = 2 * lay.d
        if kind == "copy":
            lit, t = a, b
            li = lay.lit_index(lit)
            per = comb(d2, 2)
            ranks = sorted(_pair_rank(min(t - 1, s), max(t - 1, s), d2)
                           for s in range(d2) if s != t - 1)
            for r in ranks:
                yield lay.gadget("copy_eq", li * per + r)
            var = abs(lit) - 1
            for s in range(d2):
                tp, tn = (t - 1, s) if lit > 0 else (s, t - 1)
                yield lay.gadget("lit_ineq", var * d2 * d2 + tp * d2 + tn)
            yield lay.gadget("not_dummy", v - 1)
            j = (t + 1) // 2
            ans = self.base.query(lit, j)
            if ans is not BOTTOM:
                c, clause = ans
                yield lay.gadget("clause", c - 1,
                                 self._copies(c, clause, {lit: j}))
        elif kind == "pool":
            cls, i = a, b
            for e in lay._xinc[i]:
                yield lay.gadget("pool_eq", cls * lay.expander.m + e)
            for r, pair in enumerate(lay.pairs):
                if cls in pair:
                    yield lay.gadget("pool_ineq", (i - 1) * len(lay.pairs) + r)
            if cls >= 2:
                for q in lay.not_dummy_users(i):
                    yield lay.gadget("not_dummy", q)
            for c in lay.clause_of_pool(cls, i):
                if cls == 1:
                    clause = self.base.clause(c)
                    copies = self._copies(c, clause, {})
                else:
                    # the pool vertex only meets edges without literal copies
                    copies = [(-1, -2), (-3, -4), (-5, -6)]
                yield lay.gadget("clause", c - 1, copies)
        else:
            fam, g = a, b
            copies = None
            if fam == "clause":
                clause = self.base.clause(g + 1)
                copies = self._copies(g + 1, clause, {})
            yield lay.gadget(fam, g, copies)

    def row_edges(self, v: int) -> list[tuple[int, ...]]:
        return [e for g in self._gadgets(v) for e in g.hyperedges if v in e]

    def _answer(self, v, j):
        row = self.row_edges(v)
        return row[j - 1] if j <= len(row) else BOTTOM


def make_local_adapter(kind: str, base, params: dict | None = None,
                       trace=None) -> LocalAdapter:
    """Lazy form of a reduction. rho_3col/rho_kcol take params 'expander'
    (a Graph on 8dn vertices) and, for rho_kcol, 'k'."""
    params = params or {}
    if kind == "rho_3par":
        return ThreeParAdapter(base, trace)
    if kind == "rho_par_tw":
        return ParTwAdapter(base, trace)
    if kind == "rho_ind":
        return IndAdapter(base, trace)
    if kind in ("rho_3col", "rho_kcol"):
        k = 3 if kind == "rho_3col" else params.get("k", 3)
        expander = params.get("expander")
        if expander is None:
            expander = default_expander(8 * base.delta * base.n,
                                        params.get("seed", 0))
        return ColAdapter(base, expander, k, trace)
    raise CapacityError(f"no local adapter for {kind!r}")
