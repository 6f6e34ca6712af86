"""Simplicial homology over GF(2).

Boundary matrices are stored column by column; each column is a Python int
used as a bit set over the row indices, so adding two columns is a single XOR
and the lowest nonzero entry ("low") is ``bit_length() - 1``.  One reduction
routine serves absolute Betti numbers, relative Betti numbers and the
persistence of two-step and arrival filtrations.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterable, Sequence

from .complex import Simplex, SimplicialComplex, graph_clique_complex

# brute-force oracles refuse inputs beyond these sizes
MAX_ORACLE_VERTICES = 12
MAX_ORACLE_FREE_EDGES = 18


def colex_key(s: Simplex):
    """Order by largest vertex first; for vertex-indexed arrivals this is birth order."""
    return s[::-1]


def reduce_columns(columns: Sequence[int], cleared: Iterable[int] = ()) -> list[int]:
    """Left-to-right column reduction over GF(2).

    Returns the low row of every reduced column, or -1 where the column reduced
    to zero.  Indices in ``cleared`` are known to reduce to zero and are skipped.
    """
    skip = set(cleared)
    pivots: dict[int, int] = {}
    lows = [-1] * len(columns)
    for j, col in enumerate(columns):
        if j in skip:
            continue
        while col:
            low = col.bit_length() - 1
            other = pivots.get(low)
            if other is None:
                pivots[low] = col
                lows[j] = low
                break
            col ^= other
    return lows


class ChainComplex:
    """Ordered simplices and GF(2) boundary columns of a complex.

    ``order`` is a list of simplices per dimension; faces of a simplex must
    appear in the order of the dimension below (they always do when the
    simplices come from a face-closed complex).
    """

    def __init__(self, order: Sequence[Sequence[Simplex]]):
        self.order = [list(level) for level in order]
        self.index = [{s: i for i, s in enumerate(level)} for level in self.order]

    @classmethod
    def from_complex(cls, x: SimplicialComplex, top: int | None = None,
                     key: Callable | None = colex_key) -> "ChainComplex":
        top = x.max_dim if top is None else top
        levels = [x.dim_simplices(d) for d in range(top + 1)]
        if key is not None:
            levels = [sorted(level, key=key) for level in levels]
        return cls(levels)

    def size(self, d: int) -> int:
        return len(self.order[d]) if 0 <= d < len(self.order) else 0

    def boundary(self, d: int) -> list[int]:
        """Columns of the boundary map from dimension d to d - 1."""
        if d <= 0 or d >= len(self.order):
            return [0] * self.size(d)
        rows = self.index[d - 1]
        cols = []
        for s in self.order[d]:
            c = 0
            for i in range(len(s)):
                c |= 1 << rows[s[:i] + s[i + 1:]]
            cols.append(c)
        return cols

    def boundary_squared_is_zero(self) -> bool:
        for d in range(2, len(self.order)):
            lower = self.boundary(d - 1)
            for col in self.boundary(d):
                acc = 0
                while col:
                    low = col.bit_length() - 1
                    acc ^= lower[low]
                    col ^= 1 << low
                if acc:
                    return False
        return True

    def dump(self, d: int) -> str:
        """Text bitmap of the boundary matrix in dimension d (rows x columns)."""
        cols = self.boundary(d)
        nrows = self.size(d - 1)
        return "\n".join("".join("1" if c >> r & 1 else "." for c in cols) for r in range(nrows))


def _require_complete(x: SimplicialComplex, d: int) -> None:
    if not x.complete_through(d):
        raise ValueError(
            f"complex is capped at dimension {x.max_dim}; dimension {d} simplices are needed")


def betti(x: SimplicialComplex, q: int) -> int:
    if q < 0:
        raise ValueError("q must be >= 0")
    _require_complete(x, q + 1)
    if q > x.dimension:
        return 0
    cc = ChainComplex.from_complex(x, top=min(q + 1, x.max_dim))
    upper = reduce_columns(cc.boundary(q + 1)) if q + 1 < len(cc.order) else []
    killed = {low for low in upper if low >= 0}
    rank_up = len(killed)
    rank_q = 0
    if q > 0:
        rank_q = sum(1 for low in reduce_columns(cc.boundary(q), killed) if low >= 0)
    return cc.size(q) - rank_q - rank_up


def betti_numbers(x: SimplicialComplex, top: int | None = None) -> list[int]:
    top = x.dimension if top is None else top
    return [betti(x, q) for q in range(top + 1)]


def euler_characteristic(x: SimplicialComplex) -> int:
    _require_complete(x, x.max_dim + 1)
    return sum((-1) ** d * n for d, n in enumerate(x.f_vector))


def _check_subcomplex(x: SimplicialComplex, a: SimplicialComplex) -> None:
    if not a.simplex_set <= x.simplex_set:
        raise ValueError("A is not contained in X")
    if not a.is_face_closed():
        raise ValueError("A is not a subcomplex (not closed under faces)")


def relative_betti(x: SimplicialComplex, a: SimplicialComplex, q: int) -> int:
    """Betti number of the pair (X, A): homology of the quotient chain complex."""
    if q < 0:
        raise ValueError("q must be >= 0")
    _require_complete(x, q + 1)
    _require_complete(a, q + 1)
    _check_subcomplex(x, a)
    in_a = a.simplex_set
    levels = [[s for s in sorted(x.dim_simplices(d), key=colex_key) if s not in in_a]
              for d in range(q + 2)]
    cc = ChainComplex(levels)

    def quotient_boundary(d):
        if d <= 0:
            return [0] * cc.size(d)
        rows = cc.index[d - 1]
        cols = []
        for s in cc.order[d]:
            c = 0
            for i in range(len(s)):
                r = rows.get(s[:i] + s[i + 1:])
                if r is not None:
                    c |= 1 << r
            cols.append(c)
        return cols

    upper = reduce_columns(quotient_boundary(q + 1))
    killed = {low for low in upper if low >= 0}
    rank_q = sum(1 for low in reduce_columns(quotient_boundary(q), killed) if low >= 0)
    return cc.size(q) - rank_q - len(killed)


@dataclass(frozen=True)
class TwoStepFiltration:
    """A subcomplex ``a`` (step 0) inside ``x`` (step 1)."""

    x: SimplicialComplex
    a: SimplicialComplex

    def __post_init__(self):
        _check_subcomplex(self.x, self.a)

    def label(self, s: Simplex) -> int:
        return 0 if s in self.a.simplex_set else 1


def induced_map_ranks(f: TwoStepFiltration, q: int) -> tuple[int, int]:
    """(image rank, kernel rank) of H_q(A) -> H_q(X) induced by inclusion."""
    if q < 0:
        raise ValueError("q must be >= 0")
    _require_complete(f.x, q + 1)
    _require_complete(f.a, q + 1)
    in_a = f.a.simplex_set

    def ordered(d):
        level = f.x.dim_simplices(d)
        return sorted(level, key=lambda s: (s not in in_a, s))

    cc = ChainComplex([ordered(d) for d in range(q + 2)])
    upper = reduce_columns(cc.boundary(q + 1))
    deaths = {low: j for j, low in enumerate(upper) if low >= 0}
    lows_q = reduce_columns(cc.boundary(q), deaths) if q > 0 else [-1] * cc.size(q)
    image = kernel = 0
    for i, s in enumerate(cc.order[q]):
        if s not in in_a or lows_q[i] >= 0:
            continue
        killer = deaths.get(i)
        if killer is None:
            image += 1
        elif cc.order[q + 1][killer] not in in_a:
            kernel += 1
    return image, kernel


def prefix_betti_curve(x: SimplicialComplex, q: int, times: Sequence[int]) -> list[int]:
    """beta_q of every prefix complex X^(t), t in ``times``, from one reduction.

    Simplices are ordered by their largest vertex, so reducing the full
    boundary matrix left to right reduces every prefix submatrix on the way.
    """
    _require_complete(x, q + 1)
    cc = ChainComplex.from_complex(x, top=min(q + 1, x.max_dim))
    upper = reduce_columns(cc.boundary(q + 1)) if q + 1 < len(cc.order) else []
    killed = {low for low in upper if low >= 0}
    lows_q = reduce_columns(cc.boundary(q), killed) if q > 0 else [-1] * cc.size(q)

    births: list[tuple[int, int]] = []  # (time, +1 cycle born | -1 cycle killed)
    for s, low in zip(cc.order[q], lows_q):
        if low < 0:
            births.append((s[-1], 1))
    for s, low in zip(cc.order[q + 1] if q + 1 < len(cc.order) else [], upper):
        if low >= 0:
            births.append((s[-1], -1))
    births.sort()
    out = []
    acc = 0
    k = 0
    for t in times:
        while k < len(births) and births[k][0] <= t:
            acc += births[k][1]
            k += 1
        out.append(acc)
    return out


# -- clique-minimality oracle -------------------------------------------------

def _flag_from_edges(vertices: Iterable[int], edges: Iterable[tuple[int, int]]) -> SimplicialComplex:
    adj: dict[int, set[int]] = {v: set() for v in vertices}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    return graph_clique_complex(adj)


def is_clique_minimal(x: SimplicialComplex, a: SimplicialComplex, q: int,
                      max_vertices: int = MAX_ORACLE_VERTICES,
                      max_free_edges: int = MAX_ORACLE_FREE_EDGES) -> bool:
    """Brute-force test of (A, q)-clique-minimality.

    Every clique subcomplex Y of X containing A is the clique complex of a
    subgraph of the 1-skeleton that contains the 1-skeleton of A; all of them
    are enumerated and ``beta_q(Y, A) > 0`` must hold exactly for Y = X.
    Exponential; meant for test-sized inputs.
    """
    vx = set(x.vertices)
    va = set(a.vertices)
    if not va <= vx:
        raise ValueError("A is not contained in X")
    a_edges = set(a.dim_simplices(1))
    free_edges = [e for e in x.dim_simplices(1) if e not in a_edges]
    if len(vx) > max_vertices or len(free_edges) > max_free_edges:
        raise ValueError(f"oracle limited to {max_vertices} vertices and "
                         f"{max_free_edges} edges outside A")
    full = _flag_from_edges(vx, x.dim_simplices(1))
    if relative_betti(full, a, q) == 0:
        return False
    if q > 0:
        # an edgeless vertex outside A can be dropped without changing beta_q
        touched = va.union(*map(set, free_edges)) if free_edges else va
        if touched != vx:
            return False
        for r in range(len(free_edges)):
            for chosen in combinations(free_edges, r):
                verts = va.union(*map(set, chosen)) if chosen else va
                y = _flag_from_edges(verts, a_edges.union(chosen))
                if relative_betti(y, a, q) > 0:
                    return False
        return True
    for extra in _subsets(sorted(vx - va)):
        verts = va.union(extra)
        inner = [e for e in free_edges if e[0] in verts and e[1] in verts]
        for r in range(len(inner) + 1):
            for chosen in combinations(inner, r):
                if len(verts) == len(vx) and r == len(free_edges):
                    continue
                y = _flag_from_edges(verts, a_edges.union(chosen))
                if relative_betti(y, a, q) > 0:
                    return False
    return True


def _subsets(items):
    for r in range(len(items) + 1):
        yield from combinations(items, r)


def clique_minimal_search(max_vertices: int, q: int) -> list[dict[int, frozenset[int]]]:
    """All q-clique-minimal flag complexes (A empty) on at most ``max_vertices`` vertices.

    Candidates are the graph atlas on up to 7 vertices plus every one-vertex
    extension of the 7-vertex atlas graphs, which covers all 8-vertex graphs
    up to isomorphism.  Candidates are processed by edge count; G is minimal
    iff beta_q(G) > 0 and no smaller minimal graph embeds in G as a subgraph
    (every proper subgraph of G lies in some G - e or G - v, and the property
    "has a subgraph with beta_q > 0" is closed upward).
    Returned graphs are adjacency maps without isolated vertices.
    """
    import networkx as nx
    from networkx.algorithms.isomorphism import GraphMatcher

    if not 1 <= max_vertices <= 8:
        raise ValueError("search supports 1..8 vertices")

    atlas = [g for g in nx.graph_atlas_g() if 0 < g.number_of_nodes() <= min(max_vertices, 7)]
    candidates: list[nx.Graph] = list(atlas)
    if max_vertices == 8:
        for g in atlas:
            if g.number_of_nodes() != 7:
                continue
            for r in range(1, 8):
                for nbrs in combinations(range(7), r):
                    h = g.copy()
                    h.add_edges_from((7, u) for u in nbrs)
                    candidates.append(h)

    by_edges: dict[int, list[nx.Graph]] = {}
    for g in candidates:
        by_edges.setdefault(g.number_of_edges(), []).append(g)

    minimal: list[nx.Graph] = []
    for ne in sorted(by_edges):
        found_here = []
        for g in by_edges[ne]:
            if q > 0 and nx.number_of_isolates(g):
                continue
            x = graph_clique_complex({v: set(g[v]) for v in g})
            if betti(x, q) == 0:
                continue
            if any(GraphMatcher(g, m).subgraph_is_monomorphic() for m in minimal):
                continue
            if any(nx.is_isomorphic(g, m) for m in found_here):
                continue
            found_here.append(g)
        minimal.extend(found_here)
    return [{v: frozenset(g[v]) for v in g} for g in minimal]
