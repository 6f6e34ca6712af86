from __future__ import annotations

from itertools import combinations

import numpy as np
import pytest

from pa_topology.complex import SimplicialComplex, graph_clique_complex, octahedral_sphere


def gf2_rank(mat: np.ndarray) -> int:
    """Rank over GF(2) by dense row reduction (independent of the package engine)."""
    a = (np.asarray(mat, dtype=np.uint8) & 1).copy()
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        pivots = np.nonzero(a[r:, c])[0]
        if len(pivots) == 0:
            continue
        p = r + pivots[0]
        if p != r:
            a[[r, p]] = a[[p, r]]
        below = np.nonzero(a[:, c])[0]
        below = below[below != r]
        a[below] ^= a[r]
        r += 1
        if r == rows:
            break
    return r


def dense_boundary(lower: list[tuple], upper: list[tuple]) -> np.ndarray:
    idx = {s: i for i, s in enumerate(lower)}
    mat = np.zeros((len(lower), len(upper)), dtype=np.uint8)
    for j, s in enumerate(upper):
        for face in combinations(s, len(s) - 1):
            mat[idx[face], j] = 1
    return mat


def brute_betti(x: SimplicialComplex, q: int, a: SimplicialComplex | None = None) -> int:
    """beta_q (relative to ``a`` when given) via dense ranks of quotient boundary matrices."""
    skip = a.simplex_set if a is not None else frozenset()

    def cells(d):
        return [s for s in x.dim_simplices(d) if s not in skip]

    def rank(d):
        if d <= 0 or not cells(d) or not cells(d - 1):
            return 0
        lower, upper = cells(d - 1), cells(d)
        idx = {s: i for i, s in enumerate(lower)}
        mat = np.zeros((len(lower), len(upper)), dtype=np.uint8)
        for j, s in enumerate(upper):
            for face in combinations(s, len(s) - 1):
                if face in idx:
                    mat[idx[face], j] = 1
        return gf2_rank(mat)

    return len(cells(q)) - rank(q) - rank(q + 1)


def random_adjacency(rng: np.random.Generator, n: int, p: float) -> dict[int, set[int]]:
    adj: dict[int, set[int]] = {v: set() for v in range(1, n + 1)}
    for u, v in combinations(range(1, n + 1), 2):
        if rng.random() < p:
            adj[u].add(v)
            adj[v].add(u)
    return adj


def random_flag_complex(rng: np.random.Generator, n: int, p: float, max_dim=None) -> SimplicialComplex:
    return graph_clique_complex(random_adjacency(rng, n, p), max_dim)


def grown_adjacency(rng: np.random.Generator, T: int, m: int, plant_q: int | None = None,
                    plant_prob: float = 0.5) -> dict[int, set[int]]:
    """Random arrival-ordered graph: node t links to up to m uniformly chosen earlier nodes.

    With ``plant_q`` the first 2q nodes form an octahedral (q-1)-sphere coned by
    node 2q+1, and later nodes join the whole sphere with probability ``plant_prob``.
    """
    adj: dict[int, set[int]] = {v: set() for v in range(1, T + 1)}

    def link(u, v):
        adj[u].add(v)
        adj[v].add(u)

    start = 2
    if plant_q is not None:
        n = 2 * plant_q
        for u, v in combinations(range(1, n + 1), 2):
            if v - u != plant_q:
                link(u, v)
        for v in range(1, n + 1):
            link(n + 1, v)
        start = n + 2
    else:
        link(1, 2)
        start = 3
    for t in range(start, T + 1):
        if plant_q is not None and rng.random() < plant_prob:
            for v in range(1, 2 * plant_q + 1):
                link(t, v)
            extra = rng.choice(np.arange(2 * plant_q + 1, t), size=min(2, t - 2 * plant_q - 1), replace=False)
        else:
            k = int(rng.integers(1, min(m, t - 1) + 1))
            extra = rng.choice(np.arange(1, t), size=k, replace=False)
        for v in extra:
            link(t, int(v))
    return adj


def gamma_adjacency(k: int) -> dict[int, set[int]]:
    """Chordless square 1-2-3-4 plus k cone vertices 5..4+k."""
    adj = {1: {2, 4}, 2: {1, 3}, 3: {2, 4}, 4: {1, 3}}
    for c in range(5, 5 + k):
        adj[c] = {1, 2, 3, 4}
        for v in range(1, 5):
            adj[v].add(c)
    return adj


@pytest.fixture
def kill_complex() -> SimplicialComplex:
    """Octahedral 2-sphere on 1..6 with vertex 7 joined to all of it."""
    s = octahedral_sphere(2)
    adj = {v: set(ns) | {7} for v, ns in s.adjacency.items()}
    adj[7] = set(range(1, 7))
    return graph_clique_complex(adj)


@pytest.fixture
def instant_kill_complex() -> SimplicialComplex:
    """Square 1..4 with centre 5 (a disc), then vertex 6 joined to 1..5."""
    adj = gamma_adjacency(1)
    adj[6] = {1, 2, 3, 4, 5}
    for v in range(1, 6):
        adj[v].add(6)
    return graph_clique_complex(adj)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
