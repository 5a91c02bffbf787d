"""Exact certification oracles: weak colorability, k-partiteness,
independence number and distance to each property.

Budgets bound search nodes; running out raises CapacityError, which is never
a verdict.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .core import CapacityError, Coloring, DomainError, Graph, Hypergraph

DEFAULT_BUDGET = 10 ** 7
KINDS = ("weak-colorable", "k-partite", "independence-at-least",
         "graph-colorable")


@dataclass(frozen=True)
class PropertySpec:
    kind: str
    param: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown property {self.kind!r}")


def _as_hyper(obj) -> Hypergraph:
    return obj.as_hypergraph() if isinstance(obj, Graph) else obj


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def tick(self):
        self.used += 1
        if self.used > self.limit:
            raise CapacityError(f"search budget of {self.limit} nodes exceeded")


# -- lexicographic decision search ----------------------------------------------

def _lex_search(n: int, edges: Sequence[tuple[int, ...]], palette: int,
                rainbow: bool, budget: int) -> tuple[int, ...] | None:
    """Lexicographically smallest coloring of 1..n in which every edge is
    non-monochromatic (or rainbow). Pruned depth-first search."""
    touching: list[list[tuple[int, ...]]] = [[] for _ in range(n + 1)]
    for e in edges:
        for v in e:
            touching[v].append(e)
    col = [0] * (n + 1)
    b = _Budget(budget)

    def ok(v):
        for e in touching[v]:
            if rainbow:
                seen = set()
                for x in e:
                    if col[x]:
                        if col[x] in seen:
                            return False
                        seen.add(col[x])
            elif max(e) == v and len({col[x] for x in e}) == 1:
                return False
        return True

    def rec(v):
        if v > n:
            return True
        for c in range(1, palette + 1):
            b.tick()
            col[v] = c
            if ok(v) and rec(v + 1):
                return True
        col[v] = 0
        return False

    import sys
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * n + 1000))
    return tuple(col[1:]) if rec(1) else None


def is_weak_colorable(h: Hypergraph, palette: int,
                      budget: int = DEFAULT_BUDGET, mode: str = "exhaustive",
                      interface: Iterable[int] | None = None
                      ) -> Coloring | None:
    """A coloring with no monochromatic hyperedge, or None.

    exhaustive: lexicographically smallest coloring. propagation: the
    decomposed search of :func:`min_violations_decomposed` with zero allowed
    violations (for gadget-built instances; interface names kept vertices).
    """
    if mode == "exhaustive":
        sol = _lex_search(h.n, h.edges, palette, False, budget)
    elif mode == "propagation":
        res = min_violations_decomposed(h, palette, 0, interface, budget)
        sol = None if res is None else tuple(res[1][1:])
    else:
        raise DomainError(f"unknown mode {mode!r}")
    return None if sol is None else Coloring(palette, sol)


def is_k_partite(h: Hypergraph, budget: int = DEFAULT_BUDGET
                 ) -> Coloring | None:
    """A coloring with k colors making every hyperedge rainbow, or None."""
    sol = _lex_search(h.n, h.edges, h.k, True, budget)
    return None if sol is None else Coloring(h.k, sol)


def graph_colorable(g: Graph, palette: int, budget: int = DEFAULT_BUDGET
                    ) -> Coloring | None:
    sol = _lex_search(g.n, g.edges, palette, True, budget)
    return None if sol is None else Coloring(palette, sol)


# -- minimum violations ---------------------------------------------------------------

def components(h: Hypergraph) -> list[list[int]]:
    """Vertex sets of connected components (isolated vertices included)."""
    parent = list(range(h.n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in h.edges:
        r = find(e[0])
        for v in e[1:]:
            parent[find(v)] = r
    groups: dict[int, list[int]] = {}
    for v in range(1, h.n + 1):
        groups.setdefault(find(v), []).append(v)
    return list(groups.values())


def _component_min(edges, verts, palette, rainbow, budget, upper=None):
    """Exact minimum number of violated edges over colorings of verts.

    Vertices of degree <= 1 are private: a rainbow edge can always give its
    private vertices the unused colors and a weak edge with a private vertex
    is never forced monochromatic, so only the other vertices are searched.
    Returns (cost, colors dict)."""
    deg = {v: 0 for v in verts}
    for e in edges:
        for v in e:
            deg[v] += 1
    core = sorted((v for v in verts if deg[v] > 1), key=lambda v: (-deg[v], v))
    pos = {v: i for i, v in enumerate(core)}
    closing = [[] for _ in range(len(core) + 1)]
    for e in edges:
        inner = [pos[v] for v in e if v in pos]
        closing[max(inner) + 1 if inner else 0].append(e)

    def cost(e, col):
        inner = [col[v] for v in e if v in pos]
        if rainbow:
            return int(len(set(inner)) != len(inner))
        if len(inner) < len(e):
            return 0 if palette >= 2 or not inner else int(len(set(inner)) == 1)
        return int(len(set(inner)) == 1)

    base = sum(cost(e, {}) for e in closing[0])
    best = [len(edges) + 1 if upper is None else upper + 1, None]
    col: dict[int, int] = {}
    b = _Budget(budget)

    def rec(i, acc, used):
        if acc >= best[0]:
            return
        if i == len(core):
            best[0], best[1] = acc, dict(col)
            return
        v = core[i]
        for c in range(1, min(palette, used + 1) + 1):
            b.tick()
            col[v] = c
            rec(i + 1, acc + sum(cost(e, col) for e in closing[i + 1]),
                max(used, c))
        del col[v]

    rec(0, base, 0)
    if best[1] is None:
        return None
    sol = _fill_private(edges, verts, best[1], palette, rainbow)
    return best[0], sol


def _fill_private(edges, verts, col, palette, rainbow):
    col = dict(col)
    for e in edges:
        free = [v for v in e if v not in col]
        if not free:
            continue
        taken = [col[v] for v in e if v in col]
        spare = [c for c in range(1, palette + 1) if c not in taken]
        if rainbow:
            spare += [1] * len(free)
        elif len(set(taken)) == 1 and taken:
            spare = [c for c in range(1, palette + 1) if c != taken[0]] or [1]
        else:
            spare = spare or [1]
        for v, c in zip(free, spare + [spare[-1]] * len(free)):
            col[v] = c
    for v in verts:
        col.setdefault(v, 1)
    return col


def min_violations(h: Hypergraph, palette: int | None = None,
                   rainbow: bool = False, budget: int = DEFAULT_BUDGET
                   ) -> tuple[int, tuple[int, ...]]:
    """Minimum number of monochromatic (or, with rainbow, non-rainbow)
    hyperedges over all colorings, with an optimal coloring. Components are
    solved independently."""
    palette = palette or h.k
    inc = h.incidence()
    total, colors = 0, [1] * (h.n + 1)
    for comp in components(h):
        idx = sorted({i for v in comp for i in inc[v]})
        edges = [h.edges[i] for i in idx]
        c, sol = _component_min(edges, comp, palette, rainbow, budget)
        total += c
        for v, x in sol.items():
            colors[v] = x
    return total, tuple(colors[1:])


def independence_number(h: Hypergraph, budget: int = DEFAULT_BUDGET
                        ) -> tuple[int, tuple[int, ...]]:
    """Size of a largest vertex set containing no hyperedge, and the
    lexicographically first such set found by the search."""
    n = h.n
    inc = h.incidence()
    inside = [0] * len(h.edges)
    chosen = [False] * (n + 1)
    best = [0, ()]
    b = _Budget(budget)

    def rec(v, size):
        if size + (n - v + 1) <= best[0]:
            return
        if v > n:
            best[0] = size
            best[1] = tuple(u for u in range(1, n + 1) if chosen[u])
            return
        b.tick()
        if all(inside[i] < h.k - 1 for i in inc[v]):
            chosen[v] = True
            for i in inc[v]:
                inside[i] += 1
            rec(v + 1, size + 1)
            for i in inc[v]:
                inside[i] -= 1
            chosen[v] = False
        rec(v + 1, size)

    rec(1, 0)
    return best[0], best[1]


def min_edges_inside(h: Hypergraph, t: int, budget: int = DEFAULT_BUDGET
                     ) -> tuple[int, tuple[int, ...]]:
    """Minimum number of hyperedges entirely inside a t-subset of vertices,
    with a minimizing subset."""
    n = h.n
    if not 0 <= t <= n:
        raise DomainError(f"subset size {t} outside 0..{n}")
    inc = h.incidence()
    inside = [0] * len(h.edges)
    chosen = [False] * (n + 1)
    best = [len(h.edges) + 1, ()]
    b = _Budget(budget)

    def rec(v, size, acc):
        if acc >= best[0] or size + (n - v + 1) < t:
            return
        if size == t:
            best[0] = acc
            best[1] = tuple(u for u in range(1, n + 1) if chosen[u])
            return
        b.tick()
        gain = sum(1 for i in inc[v] if inside[i] == h.k - 1)
        chosen[v] = True
        for i in inc[v]:
            inside[i] += 1
        rec(v + 1, size + 1, acc + gain)
        for i in inc[v]:
            inside[i] -= 1
        chosen[v] = False
        rec(v + 1, size, acc)

    rec(1, 0, 0)
    return best[0], best[1]


def distance_to_property(obj: Hypergraph | Graph, spec: PropertySpec,
                         budget: int = DEFAULT_BUDGET) -> Fraction:
    """Minimum violated-edge count over assignments (or t-subsets) divided
    by delta * n. Deleting exactly the violated edges reaches the property
    and adding edges never helps a deletion-closed property."""
    h = _as_hyper(obj)
    if h.n == 0:
        return Fraction(0)
    if spec.kind == "weak-colorable":
        viol, _ = min_violations(h, spec.param, False, budget)
    elif spec.kind == "graph-colorable":
        if h.k != 2:
            raise DomainError("graph-colorable needs a graph")
        viol, _ = min_violations(h, spec.param, False, budget)
    elif spec.kind == "k-partite":
        viol, _ = min_violations(h, h.k, True, budget)
    else:
        viol, _ = min_edges_inside(h, spec.param if spec.param is not None
                                   else h.n, budget)
    return Fraction(viol, h.delta_bound * h.n)


def has_property(obj, spec: PropertySpec, budget: int = DEFAULT_BUDGET):
    """Decision oracle matching distance_to_property; returns the witness
    (Coloring or vertex tuple) or None."""
    h = _as_hyper(obj)
    if spec.kind in ("weak-colorable", "graph-colorable"):
        if isinstance(obj, Graph):
            return graph_colorable(obj, spec.param, budget)
        return is_weak_colorable(h, spec.param, budget)
    if spec.kind == "k-partite":
        return is_k_partite(h, budget)
    t = spec.param if spec.param is not None else h.n
    a, s = independence_number(h, budget)
    return s[:t] if a >= t else None


def format_witness(col: Coloring) -> str:
    return "".join(f"s col {v} {c}\n" for v, c in enumerate(col.assignment, 1))


# -- decomposed search for gadget-built instances ------------------------------------

ELIM_SIZE = 12
OPEN_LIMIT = 729


class _Group:
    """Min monochromatic count of a fixed edge set over colorings of its
    aux positions, as a function of the anchor colors; memoized."""

    def __init__(self, rel, na, nx, palette):
        self.rel, self.na, self.nx, self.palette = rel, na, nx, palette
        self.memo: dict[tuple[int, ...], tuple[int, tuple[int, ...]]] = {}

    def best(self, a):
        a = tuple(a)
        hit = self.memo.get(a)
        if hit is None:
            from itertools import product
            hit = None
            for x in product(range(1, self.palette + 1), repeat=self.nx):
                col = a + x
                c = sum(1 for e in self.rel if len({col[i] for i in e}) == 1)
                if hit is None or c < hit[0]:
                    hit = (c, x)
                    if c == 0:
                        break
            self.memo[a] = hit
        return hit

    def cost(self, a):
        return self.best(a)[0]


def _group(edges, anchors, aux, palette, cache):
    """Shared _Group for this relabeled structure."""
    names = {v: i for i, v in enumerate(list(anchors) + list(aux))}
    key = (len(anchors), len(aux),
           tuple(sorted(tuple(sorted(names[v] for v in e)) for e in edges)))
    if key not in cache:
        cache[key] = _Group(key[2], len(anchors), len(aux), palette)
    return cache[key]


class _Wcsp:
    """Weighted CSP over kept vertices. Every constraint counts
    monochromatic hyperedges, directly or through an eliminated group of
    aux vertices (at most ELIM_SIZE) evaluated by exhaustive minimization."""

    def __init__(self, h: Hypergraph, palette: int, keep: Sequence[int]):
        self.palette = palette
        inc = h.incidence()
        kept = set(keep)
        comps = self._aux_components(h, kept)
        big = [c for c in comps if len(c) > ELIM_SIZE]
        for comp in big:
            kept.update(comp)
        comps = [c for c in comps if len(c) <= ELIM_SIZE]
        self.vars = sorted(kept)
        self.idx = {v: i for i, v in enumerate(self.vars)}
        base = set(keep)
        self.promoted = [v not in base for v in self.vars]
        order = {v: i for i, v in enumerate(keep)} if not isinstance(
            keep, set) else {}
        self.rank = [order.get(v, len(order) + v) for v in self.vars]
        self.cons: list[tuple[tuple[int, ...], _Group]] = []
        self.elim = []
        cache: dict = {}
        for e in h.edges:
            if all(v in kept for v in e):
                self.cons.append((tuple(self.idx[v] for v in e),
                                  _group([e], e, (), palette, cache)))
        for comp in comps:
            idxs = sorted({i for v in comp for i in inc[v]})
            edges = [h.edges[i] for i in idxs]
            anchors = sorted({u for e in edges for u in e if u in kept})
            grp = _group(edges, anchors, sorted(comp), palette, cache)
            self.elim.append((anchors, sorted(comp), grp))
            self.cons.append((tuple(self.idx[v] for v in anchors), grp))
        self.var_cons = [[] for _ in self.vars]
        for ci, (scope, _) in enumerate(self.cons):
            for x in scope:
                self.var_cons[x].append(ci)
        self.neighbors = [sorted({y for ci in cl for y in self.cons[ci][0]} - {x})
                          for x, cl in enumerate(self.var_cons)]

    @staticmethod
    def _aux_components(h, kept):
        parent = {}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for v in range(1, h.n + 1):
            if v not in kept:
                parent[v] = v
        for e in h.edges:
            a = [v for v in e if v not in kept]
            for v in a[1:]:
                parent[find(v)] = find(a[0])
        groups: dict[int, list[int]] = {}
        for v in parent:
            groups.setdefault(find(v), []).append(v)
        return list(groups.values())

    def full_coloring(self, values: list[int], n: int) -> list[int]:
        col = [0] * (n + 1)
        for x, v in enumerate(self.vars):
            col[v] = values[x]
        for anchors, aux, grp in self.elim:
            _, x = grp.best([col[a] for a in anchors])
            for v, c in zip(aux, x):
                col[v] = c
        return col


def _bits(mask):
    c = 1
    while mask:
        if mask & 1:
            yield c
        mask >>= 1
        c += 1


class _State:
    __slots__ = ("dom", "unary", "val", "g", "mins", "lb")

    def __init__(self, dom, unary, val, g, mins, lb):
        self.dom, self.unary, self.val, self.g = dom, unary, val, g
        self.mins, self.lb = mins, lb

    def copy(self):
        return _State(list(self.dom), [list(u) for u in self.unary],
                      list(self.val), self.g, list(self.mins), self.lb)

    def refresh(self, y):
        """Recompute the unary minimum of free y inside lb."""
        u, d = self.unary[y], self.dom[y]
        m = min(u[c] for c in range(len(u)) if d >> c & 1)
        self.lb += m - self.mins[y]
        self.mins[y] = m


class _Search:
    """Depth-first branch and bound with forward checking.

    unary[x][c] collects the cost of constraints whose other variables are
    all assigned; the lower bound is g plus the unary minimum of every free
    variable. A value is dropped when its unary excess plus the least cost
    of any single still-open constraint exceeds the remaining slack."""

    def __init__(self, w: _Wcsp, budget: int, nodes: int):
        self.w = w
        self.p = w.palette
        self.B = budget
        self.b = _Budget(nodes)

    def _cell(self, ci, vals):
        return self.w.cons[ci][1].cost(vals)

    def _open_min(self, st, ci, y, c):
        """Least cost of constraint ci with y = c over free domains."""
        scope = self.w.cons[ci][0]
        opts = [(c,) if z == y else
                ((st.val[z],) if st.val[z] else tuple(_bits(st.dom[z])))
                for z in scope]
        size = 1
        for o in opts:
            size *= len(o)
        if size > OPEN_LIMIT:
            return 0
        from itertools import product
        return min(self._cell(ci, t) for t in product(*opts))

    def _assign(self, st, x, c, work):
        st.val[x] = c
        st.dom[x] = 1 << (c - 1)
        st.lb -= st.mins[x]
        st.mins[x] = 0
        for ci in self.w.var_cons[x]:
            scope = self.w.cons[ci][0]
            free = [z for z in scope if not st.val[z]]
            if not free:
                k = self._cell(ci, [st.val[z] for z in scope])
                st.g += k
                st.lb += k
            elif len(free) == 1:
                y = free[0]
                for v in range(1, self.p + 1):
                    st.unary[y][v - 1] += self._cell(
                        ci, [v if z == y else st.val[z] for z in scope])
                st.refresh(y)
                work.add(y)
            else:
                work.update(free)

    def propagate(self, st, work):
        while work:
            if st.lb > self.B:
                return False
            slack = self.B - st.lb
            y = min(work)
            work.discard(y)
            if st.val[y]:
                continue
            u = st.unary[y]
            mu = min(u[c - 1] for c in _bits(st.dom[y]))
            keep = 0
            for c in _bits(st.dom[y]):
                ex = u[c - 1] - mu
                if ex > slack:
                    continue
                worst = 0
                for ci in self.w.var_cons[y]:
                    scope = self.w.cons[ci][0]
                    if sum(1 for z in scope if not st.val[z]) >= 2:
                        worst = max(worst, self._open_min(st, ci, y, c))
                        if ex + worst > slack:
                            break
                if ex + worst <= slack:
                    keep |= 1 << (c - 1)
            if keep == st.dom[y]:
                continue
            if not keep:
                return False
            st.dom[y] = keep
            st.refresh(y)
            if keep & (keep - 1) == 0:
                self._assign(st, y, keep.bit_length(), work)
            else:
                work.update(self.w.neighbors[y])
        return st.lb <= self.B

    def run(self):
        n = len(self.w.vars)
        st = _State([(1 << self.p) - 1] * n, [[0] * self.p for _ in range(n)],
                    [0] * n, 0, [0] * n, 0)
        for scope, grp in self.w.cons:
            if not scope:
                st.g += grp.cost(())
                st.lb += grp.cost(())
        return self._rec(st, set(range(n)), 0)

    def _rec(self, st, work, used):
        self.b.tick()
        if not self.propagate(st, work):
            return None
        free = [x for x, v in enumerate(st.val) if not v]
        if not free:
            return st.g, list(st.val)
        # interface vertices first
        x = min(free, key=lambda y: (self.w.promoted[y],
                                     bin(st.dom[y]).count("1"),
                                     self.w.rank[y]))
        for c in _bits(st.dom[x]):
            if c > used + 1:
                break
            child = st.copy()
            w2: set[int] = set()
            self._assign(child, x, c, w2)
            res = self._rec(child, w2, max(used, c))
            if res is not None:
                return res
        return None


def min_violations_decomposed(h: Hypergraph, palette: int, budget: int,
                              interface: Iterable[int] | None = None,
                              nodes: int = DEFAULT_BUDGET
                              ) -> tuple[int, list[int]] | None:
    """A coloring with at most `budget` monochromatic hyperedges, or None
    when none exists.

    Small vertex groups hanging off at most three kept vertices are replaced
    by exact min-cost tables; the kept vertices are searched depth-first
    with cost-based propagation and color-symmetry breaking; ties in domain
    size branch in interface order. A None is a proof that every coloring
    violates more than `budget` hyperedges.
    """
    w = _Wcsp(h, palette, list(dict.fromkeys(interface or ())))
    res = _Search(w, budget, nodes).run()
    if res is None:
        return None
    cost, values = res
    col = w.full_coloring(values, h.n)
    return monochromatic_count(h, col), col


def monochromatic_count(h: Hypergraph, col: Sequence[int]) -> int:
    return sum(1 for e in h.edges if len({col[v] for v in e}) == 1)
