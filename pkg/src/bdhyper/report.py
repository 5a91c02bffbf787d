"""Measurement tables (tab-separated) and matching figures."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .generators import far_bounded_tw_family, multi_edge_rate  # noqa: E402
from .oracle import HypergraphOracle  # noqa: E402
from .testers import (LOCALITY_KINDS, TesterConfig,  # noqa: E402
                      ball_tester_kpartite, format_locality,
                      measure_locality)

MULTI_SIZES = (30, 60, 90, 150, 300)
EPSILONS = (0.05, 0.1, 0.2, 0.3)


def _tsv(path: str, header: list[str], rows: list[list]) -> str:
    with open(path, "w") as fh:
        fh.write("\t".join(header) + "\n")
        for r in rows:
            fh.write("\t".join(str(x) for x in r) + "\n")
    return path


def locality_table(seed: int) -> list[dict]:
    return [measure_locality(k, [60, 120, 240], seed) for k in LOCALITY_KINDS]


def multi_edge_table(seed: int, samples: int = 2000) -> list[list]:
    return [[n, f"{multi_edge_rate(n, 3, samples, seed):.6f}"]
            for n in MULTI_SIZES]


def tester_table(seed: int, seeds: int = 30) -> list[list]:
    rows = []
    for n in (120, 480):
        h = far_bounded_tw_family(n)
        for eps in EPSILONS:
            reps = [ball_tester_kpartite(HypergraphOracle(h), n,
                                         TesterConfig(eps), seed + s)
                    for s in range(seeds)]
            rej = sum(r.verdict == "reject" for r in reps)
            q = sum(r.queries_used for r in reps) / seeds
            rows.append([n, eps, f"{rej / seeds:.4f}", f"{q:.2f}"])
    return rows


def write_report(out: str, seed: int = 0) -> list[str]:
    """Write every table and figure under `out`; returns the paths."""
    os.makedirs(out, exist_ok=True)
    paths = []

    loc = locality_table(seed)
    p = os.path.join(out, "locality.tsv")
    with open(p, "w") as fh:
        fh.write(format_locality(loc))
    paths.append(p)
    fig, ax = plt.subplots(figsize=(5, 3))
    for row in loc:
        xs = sorted(row["max"])
        ax.plot(xs, [row["max"][n] for n in xs], marker="o",
                label=row["kind"])
    ax.set_xlabel("base size n")
    ax.set_ylabel("max base queries per query")
    ax.legend(fontsize=7)
    fig.tight_layout()
    paths.append(os.path.join(out, "locality.png"))
    fig.savefig(paths[-1], dpi=120)
    plt.close(fig)

    rows = multi_edge_table(seed)
    paths.append(_tsv(os.path.join(out, "multi_edge.tsv"),
                      ["n", "rate"], rows))
    fig, ax = plt.subplots(figsize=(5, 3))
    ax.plot([r[0] for r in rows], [float(r[1]) for r in rows], marker="o")
    ax.set_xscale("log")
    ax.set_xlabel("n (d = 3)")
    ax.set_ylabel("fraction of samples with a repeated triple")
    fig.tight_layout()
    paths.append(os.path.join(out, "multi_edge.png"))
    fig.savefig(paths[-1], dpi=120)
    plt.close(fig)

    rows = tester_table(seed)
    paths.append(_tsv(os.path.join(out, "tester.tsv"),
                      ["n", "epsilon", "rejection", "mean_queries"], rows))
    fig, ax = plt.subplots(figsize=(5, 3))
    for n in (120, 480):
        sub = [r for r in rows if r[0] == n]
        ax.plot([r[1] for r in sub], [float(r[3]) for r in sub], marker="o",
                label=f"n={n}")
    ax.set_xlabel("epsilon")
    ax.set_ylabel("mean queries (far family)")
    ax.legend()
    fig.tight_layout()
    paths.append(os.path.join(out, "tester.png"))
    fig.savefig(paths[-1], dpi=120)
    plt.close(fig)
    return paths
