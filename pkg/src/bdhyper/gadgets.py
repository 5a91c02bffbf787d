"""Hyperedge gadgets for the SAT-to-coloring reduction, and their exhaustive
verification.

Color convention for a k-coloring: TRUE = 1, FALSE = 2, and the dummy classes
D_1..D_{k-2} take colors 3..k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Callable, Iterable, Sequence

from .core import CapacityError

TRUE, FALSE, DUMMY = 1, 2, 3


def dummy_color(r: int) -> int:
    """Color of dummy class D_r (r >= 1)."""
    return 2 + r


class AuxAllocator:
    """Hands out vertex ids: fresh ones from V_add and indices from the
    color pools.

    Fresh ids are issued once and never again. Pool draws go through named
    cursors; a cyclic cursor wraps around its pool (used where a bounded number
    of reuses per pool vertex is acceptable).
    """

    def __init__(self, pools: dict[str, range], first_fresh: int):
        self.pools = dict(pools)
        self.next_fresh = first_fresh
        self.first_fresh = first_fresh
        self._cursors: dict[tuple[str, str], int] = {}
        self.fresh_limit: int | None = None

    def fresh(self, count: int) -> list[int]:
        if self.fresh_limit is not None and \
                self.next_fresh + count > self.fresh_limit + 1:
            raise CapacityError("V_add exhausted")
        out = list(range(self.next_fresh, self.next_fresh + count))
        self.next_fresh += count
        return out

    def take(self, pool: str, count: int, purpose: str = "",
             cyclic: bool = False) -> list[int]:
        rng = self.pools[pool]
        key = (pool, purpose)
        cur = self._cursors.get(key, 0)
        if not cyclic and cur + count > len(rng):
            raise CapacityError(f"pool {pool} exhausted for {purpose!r}")
        out = [rng[(cur + t) % len(rng)] for t in range(count)]
        self._cursors[key] = cur + count
        return out

    @property
    def fresh_issued(self) -> int:
        return self.next_fresh - self.first_fresh


@dataclass(frozen=True)
class GadgetInstance:
    kind: str
    anchors: tuple[int, ...]
    aux: tuple[int, ...]
    hyperedges: tuple[tuple[int, ...], ...]
    parts: tuple["GadgetInstance", ...] = field(default=())
    pool: tuple[int, ...] = field(default=())

    def vertices(self) -> list[int]:
        seen = dict.fromkeys(self.anchors)
        seen.update(dict.fromkeys(self.pool))
        seen.update(dict.fromkeys(self.aux))
        for e in self.hyperedges:
            seen.update(dict.fromkeys(e))
        return list(seen)


def equality_edge_count(k: int) -> int:
    a = k * k - k - 1
    total = a + 2
    return _comb(total, k) - _comb(total - 2, k - 2)


def _comb(n, r):
    from math import comb
    return comb(n, r) if 0 <= r <= n else 0


def equality_gadget(u: int, v: int, alloc: AuxAllocator, k: int = 3
                    ) -> GadgetInstance:
    """u, v plus k^2-k-1 fresh vertices; a hyperedge on every k-subset that
    does not contain both u and v."""
    if u == v:
        raise ValueError("equality gadget needs distinct anchors")
    aux = alloc.fresh(k * k - k - 1)
    local = [u, v] + aux
    edges = tuple(tuple(sorted(local[i] for i in idx))
                  for idx in combinations(range(len(local)), k)
                  if not (idx[0] == 0 and idx[1] == 1))
    return GadgetInstance("equality", (u, v), tuple(aux), edges)


def inequality_gadget(u: int, v: int, alloc: AuxAllocator, k: int = 3
                      ) -> GadgetInstance:
    """Copies u_1..u_{k-2} of u and v_1..v_{k-2} of v (each tied by an equality
    gadget) plus hyperedges {u, u_1.., v} and {u, v_1.., v}."""
    if u == v:
        raise ValueError("inequality gadget needs distinct anchors")
    us = alloc.fresh(k - 2)
    vs = alloc.fresh(k - 2)
    parts = [equality_gadget(u, x, alloc, k) for x in us]
    parts += [equality_gadget(v, x, alloc, k) for x in vs]
    edges = [e for p in parts for e in p.hyperedges]
    edges.append(tuple(sorted([u, *us, v])))
    edges.append(tuple(sorted([u, *vs, v])))
    aux = us + vs + [x for p in parts for x in p.aux]
    return GadgetInstance("inequality", (u, v), tuple(aux), tuple(edges),
                          tuple(parts))


def not_dummy_gadget(u: int, dummy_groups: Sequence[Sequence[int]], k: int = 3
                     ) -> GadgetInstance:
    """One hyperedge {u} + group per dummy class; each group holds k-1
    vertices of that class."""
    edges = []
    for grp in dummy_groups:
        if len(grp) != k - 1 or u in grp:
            raise ValueError("dummy group must hold k-1 vertices other than u")
        edges.append(tuple(sorted([u, *grp])))
    pool = tuple(x for g in dummy_groups for x in g)
    return GadgetInstance("not_dummy", (u,), (), tuple(edges), (), pool)


def clause_gadget(copies: Sequence[tuple[int, int]],
                  t_groups: Sequence[Sequence[int]],
                  alloc: AuxAllocator, k: int = 3,
                  dummy_groups: Sequence[Sequence[Sequence[int]]] = (),
                  false_pads: Sequence[Sequence[int]] = (),
                  final_pad: Sequence[int] = ()) -> GadgetInstance:
    """Forbids all three literals being FALSE.

    copies: for each literal, its two copy vertices. t_groups[r]: k-1 TRUE
    pool vertices for literal r. For k > 3, dummy_groups[r] lists k-1 vertices
    of each class D_2..D_{k-2}, false_pads[r] k-3 FALSE pool vertices padding
    the literal hyperedge and final_pad k-3 D_1 vertices padding the last one.
    """
    flat = [x for pair in copies for x in pair]
    if len(copies) != 3 or len(set(flat)) != 6:
        raise ValueError("clause gadget needs 6 distinct literal copies")
    if len(t_groups) != 3 or any(len(g) != k - 1 for g in t_groups):
        raise ValueError("need three groups of k-1 TRUE vertices")
    pad = k - 3
    false_pads = list(false_pads) or [[] for _ in range(3)]
    dummy_groups = list(dummy_groups) or [[] for _ in range(3)]
    if any(len(p) != pad for p in false_pads) or len(final_pad) != pad:
        raise ValueError("padding sizes must be k-3")
    a = alloc.fresh(3)
    edges = []
    for r in range(3):
        edges.append(tuple(sorted([*copies[r], a[r], *false_pads[r]])))
    for r in range(3):
        edges.append(tuple(sorted([a[r], *t_groups[r]])))
    for r in range(3):
        for grp in dummy_groups[r]:
            edges.append(tuple(sorted([a[r], *grp])))
    edges.append(tuple(sorted([*a, *final_pad])))
    pool = [x for g in t_groups for x in g]
    pool += [x for gs in dummy_groups for g in gs for x in g]
    pool += [x for p in false_pads for x in p] + list(final_pad)
    return GadgetInstance("clause", tuple(flat), tuple(a), tuple(edges), (),
                          tuple(pool))


def clause_edge_count(k: int) -> int:
    return 7 + 3 * (k - 3)


# -- exhaustive verification -------------------------------------------------

Relation = Callable[[tuple[int, ...]], bool]


def extendable(edges: Sequence[tuple[int, ...]], palette: int,
               fixed: dict[int, int], free: Sequence[int]) -> bool:
    """Is there a coloring of `free` that, with `fixed`, leaves no hyperedge
    monochromatic? Pruned depth-first search, exhaustive."""
    order, tie = _symmetry_order(edges, list(free))
    pos = {v: i for i, v in enumerate(order)}
    closing: list[list[tuple[int, ...]]] = [[] for _ in order]
    for e in edges:
        late = [pos[v] for v in e if v in pos]
        if not late:
            if len({fixed[v] for v in e}) == 1:
                return False
            continue
        closing[max(late)].append(e)
    col = dict(fixed)

    def ok(e):
        c0 = col[e[0]]
        return any(col[v] != c0 for v in e[1:])

    def rec(i):
        if i == len(order):
            return True
        v = order[i]
        lo = col[order[i - 1]] if tie[i] else 1
        for c in range(lo, palette + 1):
            col[v] = c
            if all(ok(e) for e in closing[i]) and rec(i + 1):
                return True
        del col[v]
        return False

    return rec(0)


def _symmetry_order(edges, free):
    """Group free vertices into classes whose transposition fixes the edge
    set. Returns the grouped order and, per position, whether it ties to the
    previous vertex (same class), so colors there may be taken nondecreasing.
    """
    eset = set(edges)

    def swaps(x, y):
        for e in edges:
            if (x in e) != (y in e):
                img = tuple(sorted(y if v == x else x if v == y else v
                                   for v in e))
                if img not in eset:
                    return False
        return True

    classes: list[list[int]] = []
    for v in free:
        for cl in classes:
            if swaps(cl[0], v):
                cl.append(v)
                break
        else:
            classes.append([v])
    order = [v for cl in classes for v in cl]
    tie = [j > 0 for cl in classes for j in range(len(cl))]
    return order, tie


def anchor_relation(g: GadgetInstance, palette: int,
                    fixed: dict[int, int] | None = None,
                    limit: int = 20) -> set[tuple[int, ...]]:
    """All anchor colorings (ordered as g.anchors) that extend to a coloring
    of the whole gadget with no monochromatic hyperedge."""
    fixed = dict(fixed or {})
    closure = g.vertices()
    unfixed = [v for v in closure if v not in fixed]
    if len(unfixed) > limit:
        raise CapacityError(
            f"closure has {len(unfixed)} free vertices (limit {limit})")
    anchors = [v for v in g.anchors if v not in fixed]
    inner = [v for v in unfixed if v not in set(anchors)]
    rel = set()
    for cols in product(range(1, palette + 1), repeat=len(anchors)):
        f = dict(fixed)
        f.update(zip(anchors, cols))
        if extendable(g.hyperedges, palette, f, inner):
            rel.add(tuple(f[v] for v in g.anchors))
    return rel


def verify_forcing(g: GadgetInstance, expected, palette: int = 3,
                   fixed: dict[int, int] | None = None, limit: int = 20,
                   contract: bool = False,
                   domain: Sequence[int] | None = None) -> bool:
    """Exhaustively compare the gadget's anchor relation with `expected`.

    expected is a set of anchor color tuples or a predicate on them. With
    contract=True, nested equality parts are first verified on their own and
    then replaced by identifying their two anchors (their aux vertices are
    private), which keeps large k = 4 inequality gadgets within the limit.
    domain, if given, restricts the comparison to anchor colors in it.
    """
    fixed = dict(fixed or {})
    if contract and g.parts:
        for p in g.parts:
            if not verify_forcing(p, lambda t: t[0] == t[1], palette,
                                  limit=limit):
                return False
        g = _contract(g)
    rel = anchor_relation(g, palette, fixed, limit)
    colors = list(domain) if domain else range(1, palette + 1)
    rel = {t for t in rel if all(c in colors for c in t)}
    universe = set()
    for cols in product(colors, repeat=len(g.anchors)):
        t = tuple(cols)
        if all(fixed.get(v, t[i]) == t[i] for i, v in enumerate(g.anchors)):
            universe.add(t)
    if callable(expected):
        want = {t for t in universe if expected(t)}
    else:
        want = set(expected) & universe
    return rel == want


def _contract(g: GadgetInstance) -> GadgetInstance:
    parent: dict[int, int] = {}

    def find(x):
        while parent.get(x, x) != x:
            x = parent[x]
        return x

    part_edges = set()
    part_aux = set()
    for p in g.parts:
        a, b = p.anchors
        # keep the outer anchor as representative
        if b in g.anchors:
            a, b = b, a
        parent[find(b)] = find(a)
        part_edges.update(p.hyperedges)
        part_aux.update(p.aux)
    edges = []
    for e in g.hyperedges:
        if e in part_edges:
            continue
        edges.append(tuple(sorted({find(v) for v in e})))
    aux = tuple(x for x in g.aux if x not in part_aux and find(x) == x)
    return GadgetInstance(g.kind, g.anchors, aux, tuple(edges), (), g.pool)


def degree_contribution(g: GadgetInstance) -> dict[int, int]:
    deg: dict[int, int] = {}
    for e in g.hyperedges:
        for v in e:
            deg[v] = deg.get(v, 0) + 1
    return deg


def gadget_comments(g: GadgetInstance) -> list[str]:
    return [f"gadget {g.kind} anchors {' '.join(map(str, g.anchors))}"]


def relation_equal(t: tuple[int, ...]) -> bool:
    return t[0] == t[1]


def relation_unequal(t: tuple[int, ...]) -> bool:
    return t[0] != t[1]


def iter_edges(gs: Iterable[GadgetInstance]):
    for g in gs:
        yield from g.hyperedges
