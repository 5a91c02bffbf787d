"""Bounded-degree hypergraphs, graphs and colorings.

Vertices are 1-based. Hyperedges are stored as ascending tuples and the
stored sequence order is the global hyperedge ordering used by every oracle.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

BOTTOM = None  # the dummy adjacency entry


class DimensionError(ValueError):
    """Two objects that must share n (and k) do not."""


class DomainError(ValueError):
    """A vertex id, slot or literal lies outside its allowed range."""


class CapacityError(RuntimeError):
    """A search or allocation ran past its configured budget.

    Never a property verdict.
    """


@dataclass(frozen=True)
class Hypergraph:
    k: int
    n: int
    delta_bound: int
    edges: tuple[tuple[int, ...], ...] = ()
    allows_multi: bool = False

    def __post_init__(self):
        if self.k < 2:
            raise ValueError(f"uniformity must be >= 2, got {self.k}")
        if self.n < 0 or self.delta_bound < 1:
            raise ValueError("need n >= 0 and delta_bound >= 1")
        norm = tuple(tuple(sorted(e)) for e in self.edges)
        object.__setattr__(self, "edges", norm)
        deg = [0] * (self.n + 1)
        for e in norm:
            if len(e) != self.k or len(set(e)) != self.k:
                raise ValueError(f"hyperedge {e} is not a {self.k}-set")
            for v in e:
                if not 1 <= v <= self.n:
                    raise DomainError(f"vertex {v} outside 1..{self.n}")
                deg[v] += 1
        if max(deg, default=0) > self.delta_bound:
            raise ValueError(
                f"degree {max(deg)} exceeds bound {self.delta_bound}")
        if not self.allows_multi and len(set(norm)) != len(norm):
            raise ValueError("repeated hyperedge without allows_multi")

    @property
    def m(self) -> int:
        return len(self.edges)

    def degrees(self) -> list[int]:
        """Degree per vertex, index 0 unused."""
        deg = [0] * (self.n + 1)
        for e in self.edges:
            for v in e:
                deg[v] += 1
        return deg

    def max_degree(self) -> int:
        return max(self.degrees(), default=0)

    def incidence(self) -> list[list[int]]:
        """Edge indices (0-based, global order) incident to each vertex."""
        rows: list[list[int]] = [[] for _ in range(self.n + 1)]
        for idx, e in enumerate(self.edges):
            for v in e:
                rows[v].append(idx)
        return rows

    def is_simple(self) -> bool:
        """Every vertex pair lies in at most one hyperedge."""
        seen = set()
        for e in self.edges:
            for pair in combinations(e, 2):
                if pair in seen:
                    return False
                seen.add(pair)
        return True


@dataclass(frozen=True)
class Graph:
    n: int
    delta_bound: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        norm = tuple((min(e), max(e)) for e in self.edges)
        object.__setattr__(self, "edges", norm)
        deg = [0] * (self.n + 1)
        for u, v in norm:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise DomainError(f"edge {(u, v)} outside 1..{self.n}")
            deg[u] += 1
            deg[v] += 1
        if len(set(norm)) != len(norm):
            raise ValueError("duplicate edge")
        if max(deg, default=0) > self.delta_bound:
            raise ValueError(
                f"degree {max(deg)} exceeds bound {self.delta_bound}")

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self) -> list[list[int]]:
        """Neighbor rows in global edge order."""
        rows: list[list[int]] = [[] for _ in range(self.n + 1)]
        for u, v in self.edges:
            rows[u].append(v)
            rows[v].append(u)
        return rows

    def max_degree(self) -> int:
        return max((len(r) for r in self.neighbors()), default=0)

    def as_hypergraph(self) -> Hypergraph:
        return Hypergraph(2, self.n, self.delta_bound, self.edges)


@dataclass(frozen=True)
class Coloring:
    palette_size: int
    assignment: tuple[int, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(self.assignment))
        for c in self.assignment:
            if not 1 <= c <= self.palette_size:
                raise DomainError(f"color {c} outside 1..{self.palette_size}")

    def __getitem__(self, v: int) -> int:
        return self.assignment[v - 1]

    def __len__(self) -> int:
        return len(self.assignment)


def build_adjacency(h: Hypergraph) -> list[list[tuple[int, ...] | None]]:
    """The bounded-degree representation: n rows of delta_bound slots.

    Row i (list index i-1) holds the hyperedges containing i in global order,
    padded with BOTTOM.
    """
    rows: list[list] = [[] for _ in range(h.n)]
    for e in h.edges:
        for v in e:
            rows[v - 1].append(e)
    for r in rows:
        r.extend([BOTTOM] * (h.delta_bound - len(r)))
    return rows


def hyper_distance(h1: Hypergraph, h2: Hypergraph,
                   delta: int | None = None) -> Fraction:
    """Symmetric-difference distance normalised by delta * n."""
    if h1.n != h2.n or h1.k != h2.k:
        raise DimensionError(
            f"(n, k) = {(h1.n, h1.k)} vs {(h2.n, h2.k)}")
    delta = delta or max(h1.delta_bound, h2.delta_bound)
    if h1.n == 0:
        return Fraction(0)
    c1, c2 = Counter(h1.edges), Counter(h2.edges)
    diff = sum(((c1 - c2) + (c2 - c1)).values())
    return Fraction(diff, delta * h1.n)


def gaifman(h: Hypergraph) -> Graph:
    """Primal graph: u ~ v iff they share a hyperedge. Edges in lex order."""
    pairs = set()
    for e in h.edges:
        pairs.update(combinations(e, 2))
    return Graph(h.n, max(1, (h.k - 1) * h.delta_bound), tuple(sorted(pairs)))


def induced_subhypergraph(h: Hypergraph, s: Iterable[int]
                          ) -> tuple[Hypergraph, dict[int, int]]:
    """Hyperedges entirely inside s, relabeled 1..|s| by ascending id.

    Returns the subhypergraph and the map original id -> new id.
    """
    s = sorted(set(s))
    for v in s:
        if not 1 <= v <= h.n:
            raise DomainError(f"vertex {v} outside 1..{h.n}")
    relabel = {v: i + 1 for i, v in enumerate(s)}
    edges = tuple(tuple(relabel[v] for v in e) for e in h.edges
                  if all(v in relabel for v in e))
    return (Hypergraph(h.k, len(s), h.delta_bound, edges, h.allows_multi),
            relabel)


def simplify(h: Hypergraph) -> Hypergraph:
    """Collapse repeated hyperedges, keeping first occurrences in order."""
    seen = dict.fromkeys(h.edges)
    return Hypergraph(h.k, h.n, h.delta_bound, tuple(seen), False)


def complete_hypergraph(k: int, n: int) -> Hypergraph:
    edges = tuple(combinations(range(1, n + 1), k))
    deg = len(edges) * k // n if n else 1
    return Hypergraph(k, n, max(1, deg), edges)


def disjoint_union(parts: Sequence[Hypergraph]) -> Hypergraph:
    edges, off = [], 0
    for p in parts:
        edges.extend(tuple(v + off for v in e) for e in p.edges)
        off += p.n
    k = parts[0].k if parts else 3
    delta = max((p.delta_bound for p in parts), default=1)
    return Hypergraph(k, off, delta, tuple(edges),
                      any(p.allows_multi for p in parts))


def monochromatic_edges(h: Hypergraph, colors: Sequence[int]) -> int:
    """Number of hyperedges whose vertices all share one color.

    colors is indexed by vertex id (index 0 unused) or is a Coloring.
    """
    col = _as_lookup(colors)
    return sum(1 for e in h.edges if len({col[v] for v in e}) == 1)


def non_rainbow_edges(h: Hypergraph, colors: Sequence[int]) -> int:
    col = _as_lookup(colors)
    return sum(1 for e in h.edges if len({col[v] for v in e}) != len(e))


def _as_lookup(colors):
    if isinstance(colors, Coloring):
        return (0,) + colors.assignment
    return colors


# -- text formats ----------------------------------------------------------

class ParseError(ValueError):
    pass


def format_hypergraph(h: Hypergraph, comments: Sequence[str] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    head = f"p hgr {h.k} {h.n} {h.delta_bound} {h.m}"
    lines.append(head + (" multi" if h.allows_multi else ""))
    lines.extend(" ".join(map(str, e)) for e in h.edges)
    return "\n".join(lines) + "\n"


def format_graph(g: Graph, comments: Sequence[str] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p gr {g.n} {g.delta_bound} {g.m}")
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def parse_instance(text: str) -> Hypergraph | Graph:
    """Parse either the hgr or the gr format (decided by the header)."""
    header = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if header is not None:
                raise ParseError(f"line {lineno}: second header")
            header = line.split()
            continue
        if header is None:
            raise ParseError(f"line {lineno}: data before header")
        try:
            rows.append(tuple(int(t) for t in line.split()))
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
    if header is None:
        raise ParseError("missing 'p' header")
    try:
        if header[1] == "hgr" and len(header) in (6, 7):
            k, n, delta, m = map(int, header[2:6])
            multi = len(header) == 7
            if multi and header[6] != "multi":
                raise ParseError(f"unknown flag {header[6]!r}")
            if len(rows) != m:
                raise ParseError(f"header says {m} edges, found {len(rows)}")
            return Hypergraph(k, n, delta, tuple(rows), multi)
        if header[1] == "gr" and len(header) == 5:
            n, delta, m = map(int, header[2:5])
            if len(rows) != m or any(len(r) != 2 for r in rows):
                raise ParseError("edge lines do not match the header")
            return Graph(n, delta, tuple(rows))
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    raise ParseError(f"unrecognised header {' '.join(header)!r}")
