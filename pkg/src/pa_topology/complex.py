"""Simplicial complexes, with an emphasis on clique (flag) complexes.

Simplices are strictly increasing tuples of integer vertices, stored per
dimension in lexicographic order.  A complex flagged ``flag=True`` is the
clique complex of its 1-skeleton truncated at ``max_dim``; everything else is
taken to be exactly the simplices it stores.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .pa_graph import SimpleGraph

Simplex = tuple[int, ...]


@dataclass(frozen=True, eq=False)
class SimplicialComplex:
    simplices: tuple[tuple[Simplex, ...], ...]
    max_dim: int
    flag: bool = False

    @classmethod
    def from_simplices(cls, simplices: Iterable[Sequence[int]], max_dim: int | None = None,
                       close: bool = True, flag: bool = False) -> "SimplicialComplex":
        """Build from maximal (or any) simplices, adding all faces when ``close``."""
        found: set[Simplex] = set()
        for s in simplices:
            s = tuple(sorted(set(s)))
            if not s:
                continue
            if close:
                for k in range(1, len(s) + 1):
                    found.update(combinations(s, k))
            else:
                found.add(s)
        top = max((len(s) - 1 for s in found), default=-1)
        if max_dim is None:
            max_dim = max(top, 0)
        by_dim: list[list[Simplex]] = [[] for _ in range(max_dim + 1)]
        for s in found:
            if len(s) - 1 <= max_dim:
                by_dim[len(s) - 1].append(s)
        return cls(tuple(tuple(sorted(d)) for d in by_dim), max_dim, flag)

    @classmethod
    def empty(cls, max_dim: int = 0) -> "SimplicialComplex":
        return cls(tuple(() for _ in range(max_dim + 1)), max_dim, True)

    def __eq__(self, other):
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self.simplex_set == other.simplex_set

    def __hash__(self):
        return hash(frozenset(self.simplex_set))

    def __repr__(self):
        return f"SimplicialComplex(f={self.f_vector}, max_dim={self.max_dim}, flag={self.flag})"

    def __contains__(self, s) -> bool:
        return tuple(s) in self.simplex_set

    def __iter__(self):
        for level in self.simplices:
            yield from level

    def __len__(self):
        return sum(len(level) for level in self.simplices)

    def dim_simplices(self, d: int) -> tuple[Simplex, ...]:
        if 0 <= d < len(self.simplices):
            return self.simplices[d]
        return ()

    @property
    def f_vector(self) -> tuple[int, ...]:
        return tuple(len(level) for level in self.simplices)

    @property
    def dimension(self) -> int:
        """Top dimension actually present (-1 for the empty complex)."""
        nonempty = [d for d, level in enumerate(self.simplices) if level]
        return nonempty[-1] if nonempty else -1

    @cached_property
    def simplex_set(self) -> frozenset[Simplex]:
        return frozenset(self)

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(s[0] for s in self.dim_simplices(0))

    @cached_property
    def adjacency(self) -> dict[int, frozenset[int]]:
        nbrs: dict[int, set[int]] = {v: set() for v in self.vertices}
        for u, v in self.dim_simplices(1):
            nbrs[u].add(v)
            nbrs[v].add(u)
        return {v: frozenset(s) for v, s in nbrs.items()}

    def one_skeleton_edges(self) -> tuple[Simplex, ...]:
        return self.dim_simplices(1)

    @cached_property
    def truncated(self) -> bool:
        """True when the cap at ``max_dim`` hides simplices of the flag completion."""
        if not self.flag:
            return False
        adj = self.adjacency
        for s in self.dim_simplices(self.max_dim):
            common = set(adj[s[0]])
            for v in s[1:]:
                common &= adj[v]
                if not common:
                    break
            if common:
                return True
        return False

    def complete_through(self, d: int) -> bool:
        """Whether every simplex of dimension <= d is stored."""
        return d <= self.max_dim or not self.truncated

    def is_face_closed(self) -> bool:
        present = self.simplex_set
        for level in self.simplices[1:]:
            for s in level:
                for i in range(len(s)):
                    if s[:i] + s[i + 1:] not in present:
                        return False
        return True

    def has_flag_property(self) -> bool:
        """Every vertex set (within the cap) spanning a clique is a simplex."""
        return self == _clique_complex_on(self.adjacency, self.vertices, self.max_dim)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(dumps_complex(self))


def _expand(adj: Mapping[int, frozenset[int] | set[int]], order: Sequence[int], max_dim: int) -> list[list[Simplex]]:
    """Enumerate cliques by growing each one downward from its largest vertex.

    Candidate sets are lower neighbours, so the work per clique is bounded by
    the lower degree, which is at most ``m`` for attachment graphs.
    """
    by_dim: list[list[Simplex]] = [[] for _ in range(max_dim + 1)]
    lower = {v: sorted((u for u in adj[v] if u < v), reverse=True) for v in order}

    def grow(clique: Simplex, cands: list[int]):
        d = len(clique) - 1
        by_dim[d].append(clique)
        if d == max_dim:
            return
        for i, u in enumerate(cands):
            nu = adj[u]
            grow((u,) + clique, [w for w in cands[i + 1:] if w in nu])

    for v in order:
        grow((v,), lower[v])
    for level in by_dim:
        level.sort()
    return by_dim


def _clique_complex_on(adj, vertices, max_dim) -> SimplicialComplex:
    by_dim = _expand(adj, sorted(vertices), max_dim)
    return SimplicialComplex(tuple(tuple(level) for level in by_dim), max_dim, True)


def clique_complex(g: SimpleGraph, max_dim: int | None = None) -> SimplicialComplex:
    """Clique complex of ``g``; with ``max_dim=None`` no simplex is left out."""
    adj = {v: frozenset(g.adjacency[v]) for v in range(1, g.num_nodes + 1)}
    if max_dim is None:
        return _full_clique_complex(adj)
    if max_dim < 0:
        raise ValueError("max_dim must be >= 0")
    return _clique_complex_on(adj, adj.keys(), max_dim)


def graph_clique_complex(adj: Mapping[int, Iterable[int]], max_dim: int | None = None) -> SimplicialComplex:
    """Same as :func:`clique_complex` for an adjacency mapping over arbitrary vertices."""
    adj = {v: frozenset(ns) for v, ns in adj.items()}
    if max_dim is None:
        return _full_clique_complex(adj)
    return _clique_complex_on(adj, adj.keys(), max_dim)


def _full_clique_complex(adj) -> SimplicialComplex:
    if not adj:
        return SimplicialComplex.empty()
    # a clique has at most 1 + (max lower degree) vertices
    cap = max(sum(1 for u in ns if u < v) for v, ns in adj.items())
    return _clique_complex_on(adj, adj.keys(), cap)


def induced(x: SimplicialComplex, vs: Iterable[int]) -> SimplicialComplex:
    keep = set(vs)
    missing = keep - set(x.vertices)
    if missing:
        raise ValueError(f"vertices {sorted(missing)} are not in the complex")
    levels = tuple(tuple(s for s in level if all(v in keep for v in s)) for level in x.simplices)
    return SimplicialComplex(levels, x.max_dim, x.flag)


def prefix(x: SimplicialComplex, t: int) -> SimplicialComplex:
    """Subcomplex on vertices ``<= t``."""
    if t < 1:
        raise ValueError("t must be >= 1")
    levels = tuple(tuple(s for s in level if s[-1] <= t) for level in x.simplices)
    return SimplicialComplex(levels, x.max_dim, x.flag)


def star(x: SimplicialComplex, v: int) -> SimplicialComplex:
    if (v,) not in x:
        raise ValueError(f"vertex {v} is not in the complex")
    cofaces = [s for s in x if v in s]
    return SimplicialComplex.from_simplices(cofaces, max_dim=x.max_dim, flag=x.flag)


def link(x: SimplicialComplex, v: int) -> SimplicialComplex:
    if (v,) not in x:
        raise ValueError(f"vertex {v} is not in the complex")
    levels: list[list[Simplex]] = [[] for _ in range(max(x.max_dim, 1))]
    for level in x.simplices[1:]:
        for s in level:
            if v in s:
                rest = tuple(w for w in s if w != v)
                levels[len(rest) - 1].append(rest)
    return SimplicialComplex(tuple(tuple(sorted(level)) for level in levels),
                             max(x.max_dim - 1, 0), x.flag)


def octahedral_sphere(q: int) -> SimplicialComplex:
    """Cross-polytope boundary: vertices 1..2(q+1), ``i`` opposite ``i + q + 1``."""
    if q < -1:
        raise ValueError("q must be >= -1")
    if q == -1:
        return SimplicialComplex.empty()
    n = q + 1
    adj = {v: frozenset(u for u in range(1, 2 * n + 1) if u != v and abs(u - v) != n)
           for v in range(1, 2 * n + 1)}
    return _clique_complex_on(adj, adj.keys(), q)


def octahedral_ball(q: int) -> SimplicialComplex:
    """Cone over the octahedral (q-1)-sphere; the apex is vertex 2q + 1."""
    if q < 0:
        raise ValueError("q must be >= 0")
    n = q
    apex = 2 * n + 1
    adj = {v: set(u for u in range(1, 2 * n + 1) if u != v and abs(u - v) != n)
           for v in range(1, 2 * n + 1)}
    for v in adj:
        adj[v].add(apex)
    adj[apex] = set(range(1, 2 * n + 1))
    return _clique_complex_on({v: frozenset(s) for v, s in adj.items()}, adj.keys(), q)


def is_cross_polytope_graph(vertices: Sequence[int], adj: Mapping[int, Iterable[int]]) -> bool:
    """Whether the graph induced on ``vertices`` is the 1-skeleton of an octahedral sphere.

    That graph is exactly the complement of a perfect matching, which is an
    isomorphism-invariant characterization.
    """
    vs = set(vertices)
    n = len(vs)
    if n == 0 or n % 2:
        return False
    partner: dict[int, int] = {}
    for v in vs:
        missing = vs - set(adj[v]) - {v}
        if len(missing) != 1:
            return False
        partner[v] = missing.pop()
    return all(partner[partner[v]] == v for v in vs)


def matches_octahedral_sphere(x: SimplicialComplex, q: int) -> bool:
    if q < 0:
        return len(x) == 0
    if len(x.vertices) != 2 * (q + 1):
        return False
    return is_cross_polytope_graph(x.vertices, x.adjacency)


def dumps_complex(x: SimplicialComplex) -> str:
    lines = [f"flag-complex v1 max_dim={x.max_dim}"]
    for level in x.simplices:
        lines.extend(" ".join(map(str, s)) for s in level)
    return "\n".join(lines) + "\n"


def loads_complex(text: str) -> SimplicialComplex:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("flag-complex v1 max_dim="):
        raise ValueError("missing 'flag-complex v1 max_dim=<d>' header")
    max_dim = int(lines[0].split("=", 1)[1])
    simplices = [tuple(int(v) for v in ln.split()) for ln in lines[1:]]
    x = SimplicialComplex.from_simplices(simplices, max_dim=max_dim, close=False, flag=True)
    if not x.is_face_closed():
        raise ValueError("serialized complex is not closed under faces")
    return x


def load_complex(path: str | Path) -> SimplicialComplex:
    return loads_complex(Path(path).read_text())
