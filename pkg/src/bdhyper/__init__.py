"""Bounded-degree hypergraph reductions, solvers and testers."""

__version__ = "0.1.0"
