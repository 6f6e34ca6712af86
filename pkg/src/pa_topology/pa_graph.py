"""Affine preferential attachment multigraphs.

Nodes are numbered 1..T.  Node ``t`` sends ``m`` edges to earlier nodes, each
target ``v`` drawn with probability proportional to ``degree(v) + delta``
where the degrees are refreshed after every single edge.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np


@dataclass(frozen=True)
class PAParams:
    T: int
    m: int
    delta: float
    seed: int = 0

    def __post_init__(self):
        if int(self.T) != self.T or self.T < 2:
            raise ValueError(f"T must be an integer >= 2, got {self.T}")
        if int(self.m) != self.m or self.m < 1:
            raise ValueError(f"m must be an integer >= 1, got {self.m}")
        if not self.delta > -self.m:
            raise ValueError(f"delta must exceed -m = {-self.m}, got {self.delta}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


class FenwickSampler:
    """Binary indexed tree over nonnegative float weights at positions 1..n.

    ``find(u)`` returns the smallest index whose cumulative weight exceeds
    ``u``, which turns one uniform draw on ``[0, total)`` into a categorical
    sample.
    """

    def __init__(self, n: int):
        self.n = n
        self.tree = [0.0] * (n + 1)
        self.weights = [0.0] * (n + 1)
        self.total = 0.0
        self._top = 1 << (n.bit_length() - 1) if n > 0 else 0

    def add(self, i: int, w: float) -> None:
        self.weights[i] += w
        self.total += w
        n, tree = self.n, self.tree
        while i <= n:
            tree[i] += w
            i += i & -i

    def prefix(self, i: int) -> float:
        s = 0.0
        tree = self.tree
        while i > 0:
            s += tree[i]
            i -= i & -i
        return s

    def find(self, u: float, limit: int | None = None) -> int:
        pos = 0
        step = self._top
        n, tree = self.n, self.tree
        while step:
            nxt = pos + step
            if nxt <= n and tree[nxt] <= u:
                pos = nxt
                u -= tree[nxt]
            step >>= 1
        i = pos + 1
        # float round-off can push the draw past the last positive weight
        if limit is None:
            limit = n
        while i > limit or self.weights[i] <= 0.0:
            i -= 1
        return i


@dataclass
class MultiDiGraph:
    """Directed multigraph with every edge pointing from a later to an earlier node.

    ``edges`` maps ``(source, target)`` to multiplicity.  ``degree`` has length
    ``num_nodes + 1``; entry 0 is unused.
    """

    num_nodes: int
    edges: dict[tuple[int, int], int]
    degree: np.ndarray
    params: PAParams | None = None

    @classmethod
    def from_edges(cls, num_nodes: int, edges: Iterable[tuple[int, int, int]],
                   params: PAParams | None = None) -> "MultiDiGraph":
        groups: dict[tuple[int, int], int] = {}
        for s, t, mult in edges:
            if not num_nodes >= s > t >= 1:
                raise ValueError(f"edge {s}->{t} must point from a later to an earlier node")
            if mult < 1:
                raise ValueError("multiplicity must be positive")
            groups[(s, t)] = groups.get((s, t), 0) + mult
        degree = np.zeros(num_nodes + 1, dtype=np.int64)
        for (s, t), mult in groups.items():
            degree[s] += mult
            degree[t] += mult
        return cls(num_nodes, dict(sorted(groups.items())), degree, params)

    def edge_list(self) -> list[tuple[int, int, int]]:
        return [(s, t, k) for (s, t), k in self.edges.items()]

    def multiplicity(self, source: int, target: int) -> int:
        return self.edges.get((source, target), 0)

    def out_degree(self, v: int) -> int:
        return sum(k for (s, _), k in self.edges.items() if s == v)

    @property
    def total_multiplicity(self) -> int:
        return sum(self.edges.values())

    def out_neighbors(self) -> list[dict[int, int]]:
        """Per node, the map target -> multiplicity of its outgoing edge-groups."""
        out: list[dict[int, int]] = [dict() for _ in range(self.num_nodes + 1)]
        for (s, t), k in self.edges.items():
            out[s][t] = k
        return out

    def prefix(self, t: int) -> "MultiDiGraph":
        """Subgraph induced by nodes 1..t (the graph as it stood at time t)."""
        t = min(t, self.num_nodes)
        kept = [(s, u, k) for (s, u), k in self.edges.items() if s <= t]
        return MultiDiGraph.from_edges(t, kept, self.params)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(dumps_graph(self))


@dataclass
class SimpleGraph:
    num_nodes: int
    adjacency: list[tuple[int, ...]] = field(repr=False)

    @classmethod
    def from_edges(cls, num_nodes: int, edges: Iterable[tuple[int, int]]) -> "SimpleGraph":
        nbrs: list[set[int]] = [set() for _ in range(num_nodes + 1)]
        for u, v in edges:
            if u == v:
                raise ValueError("self-loops are not allowed")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(num_nodes, [tuple(sorted(s)) for s in nbrs])

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def lower_neighbors(self, v: int) -> list[int]:
        return [u for u in self.adjacency[v] if u < v]

    def edges(self) -> Iterator[tuple[int, int]]:
        for v in range(1, self.num_nodes + 1):
            for u in self.adjacency[v]:
                if u > v:
                    yield (v, u)

    @property
    def num_edges(self) -> int:
        return sum(len(a) for a in self.adjacency) // 2

    def to_multidigraph(self) -> MultiDiGraph:
        return MultiDiGraph.from_edges(self.num_nodes, ((v, u, 1) for u, v in self.edges()))


def attachment_distribution(degree: np.ndarray, num_candidates: int, delta: float) -> np.ndarray:
    """Probability of each existing node 1..num_candidates being the next target.

    ``degree`` is indexed from 1 (entry 0 ignored) and must already include
    every edge placed so far, including earlier edges of the arriving node.
    """
    w = np.asarray(degree[1:num_candidates + 1], dtype=float) + delta
    if num_candidates < 1 or np.any(w <= 0):
        raise ValueError("every candidate weight degree + delta must be positive")
    return w / w.sum()


def generate(params: PAParams) -> MultiDiGraph:
    T, m, delta = params.T, params.m, float(params.delta)
    rng = np.random.default_rng(params.seed)
    draws = rng.random(m * (T - 2)).tolist()

    degree = [0] * (T + 1)
    degree[1] = degree[2] = m
    sampler = FenwickSampler(T)
    sampler.add(1, m + delta)
    sampler.add(2, m + delta)
    groups: dict[tuple[int, int], int] = {(2, 1): m}

    k = 0
    for t in range(3, T + 1):
        for _ in range(m):
            v = sampler.find(draws[k] * sampler.total, limit=t - 1)
            k += 1
            degree[v] += 1
            sampler.add(v, 1.0)
            groups[(t, v)] = groups.get((t, v), 0) + 1
        degree[t] = m
        sampler.add(t, m + delta)

    return MultiDiGraph(T, dict(sorted(groups.items())), np.asarray(degree, dtype=np.int64), params)


def simplify(g: MultiDiGraph) -> SimpleGraph:
    return SimpleGraph.from_edges(g.num_nodes, g.edges.keys())


def dumps_graph(g: MultiDiGraph) -> str:
    p = g.params
    if p is None:
        header = f"pa-graph v1 {g.num_nodes} 0 0 0"
    else:
        header = f"pa-graph v1 {p.T} {p.m} {p.delta!r} {p.seed}"
    lines = [header] + [f"{s} {t} {k}" for (s, t), k in g.edges.items()]
    return "\n".join(lines) + "\n"


def loads_graph(text: str) -> MultiDiGraph:
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0][:2] != ["pa-graph", "v1"] or len(lines[0]) != 6:
        raise ValueError("missing 'pa-graph v1 T m delta seed' header")
    T, m, delta, seed = int(lines[0][2]), int(lines[0][3]), float(lines[0][4]), int(lines[0][5])
    params = PAParams(T, m, delta, seed) if m >= 1 else None
    edges = [(int(a), int(b), int(c)) for a, b, c in lines[1:]]
    return MultiDiGraph.from_edges(T, edges, params)


def load_graph(path: str | Path) -> MultiDiGraph:
    return loads_graph(Path(path).read_text())
