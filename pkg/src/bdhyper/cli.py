"""Command-line front end.

Exit codes: 0 property holds / accept / suite passed, 1 property fails /
reject / suite failed, 2 bad input or parameters, 3 capacity or tester error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import __version__
from .cnf import format_dimacs, parse_dimacs
from .core import (CapacityError, DimensionError, DomainError, Graph,
                   Hypergraph, ParseError, format_graph, format_hypergraph,
                   gaifman, parse_instance)
from .generators import GenerationError
from .testers import TesterError

GEN_KINDS = ("appendix-b", "expander", "fn-csp", "hard-pipeline", "yes-tw",
             "far-tw")
REDUCE_KINDS = {"three-par": "rho_3par", "k-par": "rho_kpar",
                "gaifman": "rho_par_tw", "ind": "rho_ind",
                "three-col": "rho_3col", "k-col": "rho_kcol"}
SOLVE_KINDS = {"k-partite": "k-partite", "weak-colorable": "weak-colorable",
               "graph-colorable": "graph-colorable",
               "independence": "independence-at-least"}
SUITE_NAMES = ("gadgets", "reductions", "gaps", "locality",
               "appendix-b-stats", "soundness", "construction", "tester",
               "determinism")


class UsageError(ValueError):
    """Bad combination of command-line inputs."""


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _manifest(args, extra=()) -> list[str]:
    keys = ("n", "d", "seed", "target")
    out = [f"tool=bdhyper {__version__}", f"kind={args.kind}"]
    out += [f"{k}={getattr(args, k)}" for k in keys
            if getattr(args, k, None) is not None]
    return out + list(extra)


# -- gen ----------------------------------------------------------------------------

def gen_text(args) -> str:
    from . import generators as gen
    from .generators import csp_to_3cnf
    kind, n, d, seed = args.kind, args.n, args.d, args.seed
    if kind == "appendix-b":
        h = gen.sample_appendix_b(n, d or 3, seed)
        return format_hypergraph(h, _manifest(args))
    if kind == "expander":
        e = gen.random_regular_expander(n, d or 3, seed,
                                        ratio=Fraction(args.ratio))
        return format_graph(e.graph, _manifest(
            args, [f"ratio={args.ratio}", f"certificate={e.certificate}"]))
    if kind == "fn-csp":
        e = gen.random_regular_expander(n, d or n - 1, seed)
        csp = gen.build_fn(e)
        f, occ = csp_to_3cnf(csp)
        return format_dimacs(f, _manifest(args, [
            f"certificate={e.certificate}", f"constraints={csp.n}",
            f"csp_variables={csp.var_count}", f"occurrence={occ}"]))
    if kind == "hard-pipeline":
        return gen.hard_instance_pipeline(n, args.target or "3col-hypergraph",
                                          seed, d).text()
    if kind == "yes-tw":
        h, part = gen.yes_bounded_tw_family(n, seed)
        return format_hypergraph(h, _manifest(
            args, ["partition=" + " ".join(map(str, part))]))
    return format_hypergraph(gen.far_bounded_tw_family(n), _manifest(args))


def cmd_gen(args) -> int:
    if args.kind == "hard-pipeline" and args.replay:
        from .generators import replay_manifest
        _write(args.out, replay_manifest(_read(args.replay)).text())
        return 0
    if args.n is None:
        raise UsageError("--n is required")
    _write(args.out, gen_text(args))
    return 0


# -- reduce -------------------------------------------------------------------------

def _load_for(kind: str, path: str):
    text = _read(path)
    if kind in ("three-col", "k-col"):
        return parse_dimacs(text)
    obj = parse_instance(text)
    want = Graph if kind in ("three-par", "k-par") else Hypergraph
    if not isinstance(obj, want):
        raise UsageError(f"reduce {kind} needs a "
                         f"{'graph' if want is Graph else 'hypergraph'} input")
    return obj


def reduce_text(kind: str, obj, k: int, seed: int) -> str:
    from .reductions import rho_3par, rho_ind, rho_kcol, rho_kpar
    if kind == "three-par":
        return format_hypergraph(rho_3par(obj))
    if kind == "k-par":
        return format_hypergraph(rho_kpar(obj, k))
    if kind == "gaifman":
        return format_graph(gaifman(obj))
    if kind == "ind":
        return format_hypergraph(rho_ind(obj))
    return format_hypergraph(rho_kcol(obj, 3 if kind == "three-col" else k,
                                      seed=seed))


def _base_oracle(obj, trace):
    from .oracle import CnfOracle, make_oracle
    if hasattr(obj, "clauses"):
        return CnfOracle(obj, obj.max_occurrence(), trace)
    return make_oracle(obj, trace)


def adapter_session(kind: str, obj, k: int, seed: int, lines, out,
                    trace) -> int:
    """Answer 'v j' queries line by line; the trace logs base and adapter
    queries as they happen."""
    from .oracle import format_answer
    from .reductions import make_local_adapter
    base = _base_oracle(obj, trace)
    ad = make_local_adapter(REDUCE_KINDS[kind], base,
                            {"k": k, "seed": seed}, trace)
    for raw in lines:
        parts = raw.split()
        if not parts or parts[0].startswith("#"):
            continue
        try:
            v, j = int(parts[0]), int(parts[1])
        except (ValueError, IndexError):
            raise UsageError(f"bad query line {raw.strip()!r}") from None
        out.write(format_answer(ad.query(v, j)) + "\n")
        if trace is not None:
            trace.flush()
    return 0


def cmd_reduce(args) -> int:
    obj = _load_for(args.kind, args.input)
    if args.adapter:
        if args.kind == "k-par":
            raise UsageError("k-par has no adapter mode")
        trace = None
        if args.trace == "-":
            trace = sys.stderr
        elif args.trace:
            trace = open(args.trace, "w")
        try:
            return adapter_session(args.kind, obj, args.k, args.seed,
                                   sys.stdin, sys.stdout, trace)
        finally:
            if trace not in (None, sys.stderr):
                trace.close()
    _write(args.output, reduce_text(args.kind, obj, args.k, args.seed))
    return 0


# -- solve --------------------------------------------------------------------------

def solve_text(kind: str, obj, args) -> tuple[int, str]:
    from .solvers import (PropertySpec, distance_to_property, format_witness,
                          has_property)
    param = None
    if kind in ("weak-colorable", "graph-colorable"):
        param = args.colors
        if kind == "graph-colorable" and not isinstance(obj, Graph):
            raise UsageError("graph-colorable needs a graph input")
    elif kind == "independence":
        param = obj.n if args.threshold in (None, "n") else int(args.threshold)
    spec = PropertySpec(SOLVE_KINDS[kind], param)
    if args.distance:
        dist = distance_to_property(obj, spec, args.budget)
        return (0 if dist == 0 else 1), f"distance={dist}\n"
    wit = has_property(obj, spec, args.budget)
    if wit is None:
        return 1, "verdict=no\n"
    if isinstance(wit, tuple):
        body = "".join(f"s set {v}\n" for v in wit)
    else:
        body = format_witness(wit)
    return 0, "verdict=yes\n" + body


def cmd_solve(args) -> int:
    obj = parse_instance(_read(args.input))
    if args.kind == "independence" and args.threshold not in (None, "n"):
        try:
            int(args.threshold)
        except ValueError:
            raise UsageError("--threshold takes an integer or 'n'") from None
    code, text = solve_text(args.kind, obj, args)
    sys.stdout.write(text)
    return code


# -- test ---------------------------------------------------------------------------

def _tester_oracle(obj, adapter: str | None):
    from .oracle import make_oracle
    from .reductions import make_local_adapter
    if adapter is None:
        if not isinstance(obj, Hypergraph):
            raise UsageError("the tester needs a hypergraph "
                             "(or --adapter three-par on a graph)")
        return make_oracle(obj)
    if adapter == "three-par":
        if not isinstance(obj, Graph):
            raise UsageError("--adapter three-par needs a graph input")
        return make_local_adapter("rho_3par", make_oracle(obj))
    if adapter == "ind":
        if not isinstance(obj, Hypergraph):
            raise UsageError("--adapter ind needs a hypergraph input")
        return make_local_adapter("rho_ind", make_oracle(obj))
    raise UsageError(f"unsupported tester adapter {adapter!r}")


def test_text(obj, args) -> tuple[int, str]:
    from .testers import TesterConfig, ball_tester_kpartite, derive_seed
    cfg = TesterConfig(args.epsilon, args.samples)
    if args.trials == 1:
        o = _tester_oracle(obj, args.adapter)
        rep = ball_tester_kpartite(o, o.n, cfg, args.seed)
        return (0 if rep.verdict == "accept" else 1), rep.text()
    lines = [f"trials={args.trials}", f"seed={args.seed}",
             f"epsilon={cfg.epsilon}", f"sample_count={cfg.sample_count}"]
    rejects = 0
    queries = []
    for i in range(args.trials):
        o = _tester_oracle(obj, args.adapter)
        rep = ball_tester_kpartite(o, o.n, cfg, derive_seed(args.seed, i))
        rejects += rep.verdict == "reject"
        queries.append(rep.queries_used)
        lines.append(f"trial {i} verdict={rep.verdict} "
                     f"queries={rep.queries_used}")
    freq = Fraction(rejects, args.trials)
    lines[4:4] = [f"rejections={rejects}", f"rejection_frequency={freq}",
                  f"queries_min={min(queries)}", f"queries_max={max(queries)}"]
    return (0 if rejects == 0 else 1), "\n".join(lines) + "\n"


def cmd_test(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    obj = parse_instance(_read(args.input))
    code, text = test_text(obj, args)
    sys.stdout.write(text)
    return code


# -- verify / report ---------------------------------------------------------------

def cmd_verify(args) -> int:
    from .suites import ALL_SUITES
    res = ALL_SUITES[args.suite]()
    sys.stdout.write(res.text())
    return 0 if res.passed else 1


def cmd_report(args) -> int:
    from .report import write_report
    for path in write_report(args.out, args.seed):
        print(path)
    return 0


# -- parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="bdhyper",
        description="Bounded-degree hypergraph reductions, solvers and "
                    "property testers.")
    p.add_argument("--version", action="version",
                   version=f"bdhyper {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate an instance")
    g.add_argument("kind", choices=GEN_KINDS)
    g.add_argument("--n", type=int)
    g.add_argument("--d", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--target", choices=("3col-hypergraph",
                                        "3partite-hypergraph", "ind-number"))
    g.add_argument("--ratio", default="1",
                   help="expander: required expansion ratio, e.g. 1/2")
    g.add_argument("--replay", metavar="FILE",
                   help="hard-pipeline: rerun from a manifest header")
    g.add_argument("--out", help="output path (default stdout)")
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("reduce", help="apply a reduction")
    r.add_argument("kind", choices=tuple(REDUCE_KINDS))
    r.add_argument("input")
    r.add_argument("output", nargs="?")
    r.add_argument("--k", type=int, default=4)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--adapter", action="store_true",
                   help="answer 'v j' queries from stdin instead")
    r.add_argument("--trace", metavar="FILE",
                   help="adapter mode: query log ('-' for stderr)")
    r.set_defaults(func=cmd_reduce)

    s = sub.add_parser("solve", help="decide a property or its distance")
    s.add_argument("kind", choices=tuple(SOLVE_KINDS))
    s.add_argument("input")
    s.add_argument("--colors", type=int, default=3)
    s.add_argument("--threshold", help="independence: integer or 'n'")
    s.add_argument("--distance", action="store_true")
    s.add_argument("--budget", type=int, default=10 ** 7)
    s.set_defaults(func=cmd_solve)

    t = sub.add_parser("test", help="run the k-partiteness tester")
    t.add_argument("input")
    t.add_argument("--epsilon", type=float, default=0.1)
    t.add_argument("--samples", type=int)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--trials", type=int, default=1)
    t.add_argument("--adapter", choices=("three-par", "ind"))
    t.set_defaults(func=cmd_test)

    v = sub.add_parser("verify", help="run a property suite")
    v.add_argument("suite", choices=SUITE_NAMES)
    v.set_defaults(func=cmd_verify)

    rp = sub.add_parser("report", help="write measurement tables and plots")
    rp.add_argument("--out", required=True, metavar="DIR")
    rp.add_argument("--seed", type=int, default=0)
    rp.set_defaults(func=cmd_report)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ParseError, DomainError, DimensionError,
            GenerationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (CapacityError, TesterError) as exc:
        print(f"capacity: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
