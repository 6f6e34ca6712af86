"""Ordered pattern counting in attachment multigraphs and log-log growth fits."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .pa_graph import MultiDiGraph, PAParams, generate
from .theory import PatternGraph, count_sequence

MAX_PATTERN_VERTICES = 8


def count_pattern(g: MultiDiGraph, p: PatternGraph) -> int:
    """Number of order-preserving embeddings of ``p`` into ``g``.

    Pattern vertex ``i`` goes to graph node ``phi(i)`` with ``phi`` strictly
    increasing, and every pattern edge ``(i, j)`` of multiplicity ``mu`` needs
    an edge-group ``phi(i) -> phi(j)`` of multiplicity at least ``mu``.
    """
    if p.n > MAX_PATTERN_VERTICES:
        raise ValueError(f"patterns are limited to {MAX_PATTERN_VERTICES} vertices")
    if p.n == 0:
        return 1
    n = p.n
    out = g.out_neighbors()
    # for each pattern vertex k: constraints from later pattern vertices i -> k
    incoming: list[list[tuple[int, int]]] = [[] for _ in range(n + 1)]
    for (i, j), mu in p.edges.items():
        incoming[j].append((i, mu))
    phi = [0] * (n + 2)
    phi[n + 1] = g.num_nodes + 1

    def candidates(k: int):
        hi = phi[k + 1]
        cons = incoming[k]
        if not cons:
            return range(k, hi)
        # seed from the sparsest constraining out-neighbourhood
        i0, mu0 = min(cons, key=lambda c: len(out[phi[c[0]]]))
        pool = [w for w, mult in out[phi[i0]].items() if mult >= mu0 and k <= w < hi]
        rest = [c for c in cons if c[0] != i0 or c[1] != mu0]
        if rest:
            pool = [w for w in pool if all(out[phi[i]].get(w, 0) >= mu for i, mu in rest)]
        return pool

    def place(k: int) -> int:
        if k == 0:
            return 1
        total = 0
        for w in candidates(k):
            phi[k] = w
            total += place(k - 1)
        return total

    return place(n)


def count_pattern_naive(g: MultiDiGraph, p: PatternGraph) -> int:
    """All-subsets reference count; only for small graphs."""
    from itertools import combinations

    total = 0
    for combo in combinations(range(1, g.num_nodes + 1), p.n):
        if all(g.multiplicity(combo[i - 1], combo[j - 1]) >= mu for (i, j), mu in p.edges.items()):
            total += 1
    return total


def fit_exponent(series: Sequence[tuple[float, float]]) -> tuple[float, float, float]:
    """Least-squares line through (log T, log count); returns (slope, intercept, r2).

    Points with nonpositive count are dropped before fitting.
    """
    pts = [(float(t), float(c)) for t, c in series if c > 0 and t > 0]
    if len(pts) < 3:
        raise ValueError("need at least 3 points with positive counts")
    x = np.log([t for t, _ in pts])
    y = np.log([c for _, c in pts])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - float((resid ** 2).sum()) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(intercept), r2


@dataclass
class CensusResult:
    pattern_id: str
    counts: list[tuple[int, float]]
    slope: float | None
    intercept: float | None
    r2: float | None
    exponent: object
    log_power: int

    def to_dict(self) -> dict:
        return {
            "pattern": self.pattern_id,
            "counts": [[t, c] for t, c in self.counts],
            "slope": self.slope,
            "intercept": self.intercept,
            "r2": self.r2,
            "predicted_exponent": float(self.exponent),
            "predicted_exponent_exact": str(self.exponent),
            "log_power": self.log_power,
        }


def census(p: PatternGraph, T_values: Sequence[int], m: int, delta, replicates: int = 1,
           seeds: Sequence[int] | None = None, pattern_id: str = "pattern") -> CensusResult:
    """Mean pattern counts at each T, using one graph per replicate cut at every T."""
    T_values = sorted(T_values)
    if not T_values:
        raise ValueError("need at least one T value")
    if seeds is None:
        seeds = list(range(replicates))
    totals = np.zeros(len(T_values))
    for s in seeds:
        g = generate(PAParams(T_values[-1], m, delta, int(s)))
        for i, T in enumerate(T_values):
            totals[i] += count_pattern(g.prefix(T), p)
    means = totals / len(seeds)
    counts = [(T, float(c)) for T, c in zip(T_values, means)]
    try:
        slope, intercept, r2 = fit_exponent(counts)
    except ValueError:
        slope = intercept = r2 = None
    _, A, r = count_sequence(p, delta, m)
    return CensusResult(pattern_id, counts, slope, intercept, r2, A, r)
