"""Slot-addressed incidence oracles with per-layer query counting.

A tester only ever sees an instance through ``query(v, j)``. Adapters built by
:mod:`bdhyper.reductions` subclass :class:`Oracle` and forward to a base oracle,
so every layer keeps its own counter and overhead is measurable as a ratio.
"""

from __future__ import annotations

from typing import TextIO

from .core import BOTTOM, DomainError, Graph, Hypergraph


class Oracle:
    """Base class: range checking, counting and optional trace output."""

    layer = "oracle"

    def __init__(self, n: int, delta: int, trace: TextIO | None = None):
        self.n = n
        self.delta = delta
        self.count = 0
        self.trace = trace

    def query(self, v: int, j: int):
        if not (1 <= v <= self.n and 1 <= j <= self.delta):
            raise DomainError(
                f"query ({v}, {j}) outside 1..{self.n} x 1..{self.delta}")
        ans = self._answer(v, j)
        self.count += 1
        if self.trace is not None:
            self.trace.write(f"Q {self.layer} {v} {j} -> {format_answer(ans)}\n")
        return ans

    def _answer(self, v: int, j: int):
        raise NotImplementedError

    def row(self, v: int) -> list:
        """All delta slots of v (delta queries)."""
        return [self.query(v, j) for j in range(1, self.delta + 1)]

    def snapshot_count(self) -> int:
        return self.count

    def reset_count(self) -> None:
        self.count = 0


def format_answer(ans) -> str:
    if ans is BOTTOM:
        return "_"
    if isinstance(ans, int):
        return str(ans)
    return " ".join(map(str, ans))


class HypergraphOracle(Oracle):
    """Oracle over a materialized hypergraph; answers are k-tuples or BOTTOM."""

    layer = "base"

    def __init__(self, h: Hypergraph, trace: TextIO | None = None,
                 layer: str = "base"):
        super().__init__(h.n, h.delta_bound, trace)
        self.target = h
        self.layer = layer
        self.k = h.k
        self._rows = [[] for _ in range(h.n + 1)]
        for e in h.edges:
            for v in e:
                self._rows[v].append(e)

    def _answer(self, v, j):
        r = self._rows[v]
        return r[j - 1] if j <= len(r) else BOTTOM


class GraphOracle(Oracle):
    """Oracle over a graph; an answer is the neighbor id or BOTTOM."""

    def __init__(self, g: Graph, trace: TextIO | None = None,
                 layer: str = "base"):
        super().__init__(g.n, g.delta_bound, trace)
        self.target = g
        self.layer = layer
        self._rows = g.neighbors()

    def _answer(self, v, j):
        r = self._rows[v]
        return r[j - 1] if j <= len(r) else BOTTOM


class CnfOracle:
    """Occurrence-list access to a CNF formula.

    ``query(lit, j)`` returns ``(clause_index, clause)`` for the j-th clause
    (in clause order) containing the signed literal, or BOTTOM;
    ``clause(c)`` returns the sorted literal tuple of clause c (1-based).
    Both count as one query.
    """

    layer = "cnf"

    def __init__(self, formula, occurrence_bound: int,
                 trace: TextIO | None = None):
        self.formula = formula
        self.n = formula.var_count
        self.m = len(formula.clauses)
        self.delta = occurrence_bound
        self.count = 0
        self.trace = trace
        self._occ: dict[int, list[int]] = {}
        for ci, cl in enumerate(formula.clauses, 1):
            for lit in cl:
                self._occ.setdefault(lit, []).append(ci)

    def _log(self, what: str, ans) -> None:
        self.count += 1
        if self.trace is not None:
            if ans is BOTTOM:
                text = "_"
            elif isinstance(ans, tuple) and ans and isinstance(ans[1], tuple):
                text = f"{ans[0]}: " + " ".join(map(str, ans[1]))
            else:
                text = " ".join(map(str, ans))
            self.trace.write(f"Q {self.layer} {what} -> {text}\n")

    def query(self, lit: int, j: int):
        if not (lit and abs(lit) <= self.n and 1 <= j <= self.delta):
            raise DomainError(f"query ({lit}, {j}) out of range")
        occ = self._occ.get(lit, [])
        ans = ((occ[j - 1], self.formula.clauses[occ[j - 1] - 1])
               if j <= len(occ) else BOTTOM)
        self._log(f"{lit} {j}", ans)
        return ans

    def clause(self, c: int) -> tuple[int, ...]:
        if not 1 <= c <= self.m:
            raise DomainError(f"clause {c} outside 1..{self.m}")
        ans = self.formula.clauses[c - 1]
        self._log(f"clause {c}", ans)
        return ans

    def snapshot_count(self) -> int:
        return self.count

    def reset_count(self) -> None:
        self.count = 0


def make_oracle(obj, trace: TextIO | None = None, layer: str = "base"):
    if isinstance(obj, Hypergraph):
        return HypergraphOracle(obj, trace, layer)
    if isinstance(obj, Graph):
        return GraphOracle(obj, trace, layer)
    raise TypeError(f"no oracle for {type(obj).__name__}")


def materialize_rows(o: Oracle) -> list[list]:
    """Every (v, j) answer; n * delta queries."""
    return [[o.query(v, j) for j in range(1, o.delta + 1)]
            for v in range(1, o.n + 1)]

