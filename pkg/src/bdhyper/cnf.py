"""CNF formulas: regularity, exhaustive satisfiability and max-sat.

Literals are signed ints (DIMACS style). Clauses are stored as tuples sorted
by (variable, sign) so a clause is a canonical set.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .core import CapacityError, DomainError, ParseError

DEFAULT_VAR_LIMIT = 24


def _lit_key(lit: int) -> tuple[int, int]:
    return abs(lit), lit < 0


def canonical_clause(lits: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(set(lits), key=_lit_key))


@dataclass(frozen=True)
class CnfFormula:
    var_count: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        norm = []
        for cl in self.clauses:
            if len(set(cl)) != len(cl):
                raise ValueError(f"repeated literal in clause {cl}")
            for lit in cl:
                if lit == 0 or abs(lit) > self.var_count:
                    raise DomainError(f"literal {lit} outside 1..{self.var_count}")
            norm.append(canonical_clause(cl))
        object.__setattr__(self, "clauses", tuple(norm))

    @property
    def m(self) -> int:
        return len(self.clauses)

    def occurrences(self) -> Counter:
        return Counter(lit for cl in self.clauses for lit in cl)

    def max_occurrence(self) -> int:
        return max(self.occurrences().values(), default=0)

    def satisfied_count(self, assignment: Sequence[int]) -> int:
        """assignment[i-1] in {0, 1} is the value of variable i."""
        return sum(1 for cl in self.clauses if _clause_true(cl, assignment))


def _clause_true(cl, a) -> bool:
    for lit in cl:
        if (a[lit - 1] == 1) if lit > 0 else (a[-lit - 1] == 0):
            return True
    return False


def validate_kc(f: CnfFormula, k: int, c: int) -> bool:
    """Every clause has <= k literals and each literal (both signs) occurs in
    exactly c clauses."""
    if any(len(cl) > k for cl in f.clauses):
        return False
    occ = f.occurrences()
    return all(occ.get(s * v, 0) == c
               for v in range(1, f.var_count + 1) for s in (1, -1))


def brute_force_sat(f: CnfFormula, limit: int = DEFAULT_VAR_LIMIT
                    ) -> tuple[int, ...] | None:
    """Lexicographically smallest satisfying assignment (0 < 1), or None.

    Depth-first over x1, x2, ... trying 0 first; a branch is cut only when
    some clause has all its variables set and is false, so the first leaf
    reached is the lexicographic minimum.
    """
    n = f.var_count
    if n > limit:
        raise CapacityError(f"{n} variables exceeds limit {limit}")
    if any(len(cl) == 0 for cl in f.clauses):
        return None
    closing: list[list[tuple[int, ...]]] = [[] for _ in range(n + 1)]
    for cl in f.clauses:
        closing[max(abs(l) for l in cl)].append(cl)
    if n == 0:
        return ()
    a = [0] * n
    i = 1
    a[0] = -1
    # iterative DFS: a[i-1] holds the value being tried (-1 = none yet)
    while i >= 1:
        a[i - 1] += 1
        if a[i - 1] > 1:
            a[i - 1] = -1
            i -= 1
            continue
        if all(_clause_true(cl, a) for cl in closing[i]):
            if i == n:
                return tuple(a)
            i += 1
            a[i - 1] = -1
    return None


def _satisfied_counts(f: CnfFormula, chunk: int = 1 << 18):
    """Yield arrays of satisfied-clause counts over all 2^n assignments,
    in lexicographic order of (x1, ..., xn)."""
    n = f.var_count
    total = 1 << n
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        bits = [(idx >> (n - v)) & 1 for v in range(1, n + 1)]
        sat = np.zeros(idx.shape, dtype=np.int32)
        for cl in f.clauses:
            t = np.zeros(idx.shape, dtype=bool)
            for lit in cl:
                t |= (bits[lit - 1] == 1) if lit > 0 else (bits[-lit - 1] == 0)
            sat += t
        yield sat


def max_sat_fraction(f: CnfFormula, limit: int = DEFAULT_VAR_LIMIT) -> Fraction:
    if f.var_count > limit:
        raise CapacityError(f"{f.var_count} variables exceeds limit {limit}")
    if not f.clauses:
        return Fraction(1)
    best = max(int(s.max()) for s in _satisfied_counts(f))
    return Fraction(best, f.m)


def sat_distance(f: CnfFormula, limit: int = DEFAULT_VAR_LIMIT) -> Fraction:
    """Fraction of clauses that must be deleted to reach satisfiability."""
    return 1 - max_sat_fraction(f, limit)


def min_unsat(f: CnfFormula, limit: int = DEFAULT_VAR_LIMIT) -> int:
    return f.m - int(max_sat_fraction(f, limit) * f.m)


# -- construction helpers --------------------------------------------------

def to_exact_three(f: CnfFormula, share: int = 4) -> CnfFormula:
    """Widen 1- and 2-literal clauses to exactly 3 literals.

    Missing slots are filled with fresh variables z that are forced false by
    the four clauses (-z v +-p v +-q) over two more fresh variables. One z
    fills up to `share` slots, so every literal occurrence count stays at
    most max(original, share, 4) and satisfiability is preserved.
    """
    n = f.var_count
    out, forcing = [], []
    z, used = 0, share

    def pad(cl):
        nonlocal n, z, used
        if used == share or z in cl:
            n += 3
            z, p, q = n - 2, n - 1, n
            forcing.extend((-z, sp * p, sq * q)
                           for sp in (1, -1) for sq in (1, -1))
            used = 0
        used += 1
        return z

    for cl in f.clauses:
        if not 1 <= len(cl) <= 3:
            raise ValueError(f"clause {cl} is not a 3-clause")
        cl = tuple(cl)
        while len(cl) < 3:
            cl = cl + (pad(cl),)
        out.append(cl)
    return CnfFormula(n, tuple(out + forcing))


def regularize(f: CnfFormula, seed: int = 0) -> tuple[CnfFormula, int]:
    """Pad an exact 3-CNF to a (3, c)-CNF with c = max literal occurrence.

    Every padding clause holds at least one positive literal over fresh
    variables, so setting all fresh variables true satisfies the padding; the
    original clauses are kept as a prefix, hence satisfiability is preserved
    both ways.
    """
    if any(len(cl) != 3 for cl in f.clauses):
        raise ValueError("regularize expects exactly 3 literals per clause")
    occ = f.occurrences()
    c = max(max(occ.values(), default=1), 2)
    deficit = [lit for v in range(1, f.var_count + 1) for lit in (v, -v)
               for _ in range(c - occ.get(lit, 0))]
    g = max(4, -(-len(deficit) // c))
    while (c * g - len(deficit)) % 3:
        g += 1
    fresh = list(range(f.var_count + 1, f.var_count + g + 1))
    pos = iter([y for _ in range(c) for y in fresh])
    neg = iter([-y for _ in range(c) for y in fresh[1:] + fresh[:1]])
    padding, slots = [], []
    # "+" / "-" mark a positive / negative fresh slot
    shapes = [(lit, "+", "-") for lit in deficit]
    shapes += [("+", "+", "-"), ("+", "-", "-")] * ((c * g - len(deficit)) // 3)
    for shape in shapes:
        cl = []
        for p, s in enumerate(shape):
            if s == "+":
                cl.append(next(pos))
                slots.append((len(padding), p, s))
            elif s == "-":
                cl.append(next(neg))
                slots.append((len(padding), p, s))
            else:
                cl.append(s)
        padding.append(cl)
    padding = _separate(padding, slots, set(f.clauses), seed)
    out = CnfFormula(f.var_count + g, f.clauses + tuple(padding))
    if not validate_kc(out, 3, c):
        raise AssertionError("regularization produced an irregular formula")
    return out, c


def _separate(clauses, slots, taken, seed):
    """Swap same-sign fresh literals until every clause has three distinct
    variables and no clause repeats. Swaps preserve occurrence counts."""
    rng = random.Random(seed)
    by_sign = {"+": [s for s in slots if s[2] == "+"],
               "-": [s for s in slots if s[2] == "-"]}
    own = {}
    for s in slots:
        own.setdefault(s[0], []).append(s)
    for _ in range(200000):
        seen, bad = set(taken), []
        for i, cl in enumerate(clauses):
            key = canonical_clause(cl)
            if len({abs(l) for l in cl}) < 3 or key in seen:
                bad.append(i)
            seen.add(key)
        if not bad:
            return [canonical_clause(cl) for cl in clauses]
        i = rng.choice(bad)
        _, p, sign = rng.choice(own[i])
        j, q, _ = rng.choice(by_sign[sign])
        clauses[i][p], clauses[j][q] = clauses[j][q], clauses[i][p]
    raise RuntimeError("could not separate padding clauses")


def random_kc_formula(n: int, c: int, seed: int, k: int = 3,
                      max_tries: int = 10000) -> CnfFormula:
    """Uniform-ish random (k, c)-CNF over n variables with exactly k distinct
    variables per clause and pairwise distinct clauses."""
    slots = 2 * n * c
    if slots % k:
        raise ValueError(f"2*n*c = {slots} not divisible by {k}")
    rng = random.Random(seed)
    lits = [s * v for v in range(1, n + 1) for s in (1, -1) for _ in range(c)]
    for _ in range(max_tries):
        rng.shuffle(lits)
        cls = [tuple(lits[i:i + k]) for i in range(0, slots, k)]
        if any(len({abs(l) for l in cl}) < k for cl in cls):
            continue
        canon = [canonical_clause(cl) for cl in cls]
        if len(set(canon)) != len(canon):
            continue
        return CnfFormula(n, tuple(sorted(canon, key=lambda cl: [
            _lit_key(l) for l in cl])))
    raise RuntimeError(f"no ({k},{c})-CNF found for n={n} after {max_tries}")


def all_sign_patterns(nvars: int = 3) -> CnfFormula:
    """Every sign pattern over variables 1..nvars: unsatisfiable, each literal
    in 2^(nvars-1) clauses."""
    clauses = []
    for mask in range(1 << nvars):
        clauses.append(tuple((-1 if mask >> (nvars - v) & 1 else 1) * v
                             for v in range(1, nvars + 1)))
    return CnfFormula(nvars, tuple(clauses))


# -- DIMACS ----------------------------------------------------------------

def format_dimacs(f: CnfFormula, comments: Sequence[str] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p cnf {f.var_count} {f.m}")
    lines.extend(" ".join(map(str, cl)) + " 0" for cl in f.clauses)
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> CnfFormula:
    header = None
    tokens: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(f"line {lineno}: bad header {line!r}")
            header = int(parts[2]), int(parts[3])
            continue
        if header is None:
            raise ParseError(f"line {lineno}: clause before header")
        try:
            tokens.extend(int(t) for t in line.split())
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}") from None
    if header is None:
        raise ParseError("missing 'p cnf' header")
    clauses, cur = [], []
    for t in tokens:
        if t == 0:
            clauses.append(tuple(cur))
            cur = []
        else:
            cur.append(t)
    if cur:
        raise ParseError("last clause not terminated by 0")
    if len(clauses) != header[1]:
        raise ParseError(f"header says {header[1]} clauses, found {len(clauses)}")
    try:
        return CnfFormula(header[0], tuple(clauses))
    except ValueError as exc:
        raise ParseError(str(exc)) from None
