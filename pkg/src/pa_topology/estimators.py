"""Per-node link statistics that sandwich the Betti numbers of a growing clique complex.

For every arriving node ``t`` the link ``L(t)`` is the clique complex on the
earlier neighbours of ``t``.  The increment of ``beta_q`` at step ``t`` equals
``rk ker f_{q-1} - rk im f_q`` where ``f`` is the inclusion of ``L(t)`` into the
complex before ``t`` arrived; the quantities here bound that increment from
above (``u``) and below (``ell - bIK - bKL`` or its hatted variant).
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Sequence

import numpy as np

from .complex import (SimplicialComplex, clique_complex, graph_clique_complex, induced,
                      is_cross_polytope_graph, link, prefix)
from .homology import (TwoStepFiltration, betti, induced_map_ranks, prefix_betti_curve,
                       relative_betti)
from .pa_graph import MultiDiGraph, simplify

PROBE_PREFIX = 20
EXACT_CAP = 2000


def _lower_adjacency(x: SimplicialComplex, t: int) -> dict[int, frozenset[int]]:
    adj = x.adjacency
    if t not in adj:
        return {}
    nbrs = {u for u in adj[t] if u < t}
    return {u: adj[u] & nbrs for u in nbrs}


def link_at(x: SimplicialComplex, t: int) -> SimplicialComplex:
    """Link of ``t`` in the prefix complex on vertices ``1..t``."""
    if t < 1:
        raise ValueError("t must be >= 1")
    if x.flag:
        # flag complexes: the link is the full clique complex of the earlier neighbourhood
        return graph_clique_complex(_lower_adjacency(x, t))
    xt = prefix(x, t)
    if (t,) not in xt:
        return SimplicialComplex.empty()
    return link(xt, t)


def u_and_bKL(x: SimplicialComplex, t: int, q: int) -> tuple[int, int]:
    if q < 1:
        raise ValueError("q must be >= 1")
    lk = link_at(x, t)
    return betti(lk, q - 1), betti(lk, q)


def _sphere_seed(x: SimplicialComplex, q: int) -> bool:
    """Whether X^(2q) is an octahedral (q-1)-sphere coned off by vertex 2q + 1."""
    n = 2 * q
    adj = x.adjacency
    base = list(range(1, n + 1))
    if any(v not in adj for v in base + [n + 1]):
        return False
    if not is_cross_polytope_graph(base, adj):
        return False
    return all(v in adj[n + 1] for v in base)


def event_S(x: SimplicialComplex, t: int, q: int) -> int:
    """Indicator that the first 2q nodes form a (q-1)-sphere, node 2q+1 cones it
    and ``t`` is adjacent to all of the sphere.

    Only defined for ``t >= 2q + 2``; at ``t = 2q + 1`` the inclusion of the
    link is the identity of the sphere, so no lower bound follows.
    """
    if t < 2 * q + 2:
        raise ValueError(f"event needs t >= 2q + 2 = {2 * q + 2}")
    if not _sphere_seed(x, q):
        return 0
    nbrs = x.adjacency.get(t, frozenset())
    return int(all(v in nbrs for v in range(1, 2 * q + 1)))


def b_IK(x: SimplicialComplex, t: int, q: int) -> int:
    if not event_S(x, t, q):
        return 0
    lk = link_at(x, t)
    return int(relative_betti(lk, induced(lk, range(1, 2 * q + 1)), q) > 0)


def first_induced_sphere(x: SimplicialComplex, k: int, probe_prefix: int = PROBE_PREFIX):
    """Lexicographically smallest vertex set of ``X^(probe_prefix)`` inducing an
    octahedral k-sphere, or None."""
    adj = x.adjacency
    size = 2 * (k + 1)
    # a cross-polytope vertex has degree size - 2 inside it
    pool = [v for v in range(1, probe_prefix + 1)
            if v in adj and sum(1 for u in adj[v] if u <= probe_prefix) >= size - 2]
    for vs in combinations(pool, size):
        if is_cross_polytope_graph(vs, adj):
            return vs
    return None


def first_cone_node(x: SimplicialComplex, sphere: Sequence[int]) -> int | None:
    """Smallest node outside ``sphere`` adjacent to every vertex of it."""
    adj = x.adjacency
    common = set(adj[sphere[0]])
    for v in sphere[1:]:
        common &= adj[v]
    common -= set(sphere)
    return min(common) if common else None


def event_S_hat(x: SimplicialComplex, t: int, q: int, probe_prefix: int = PROBE_PREFIX,
                _anchor=None) -> tuple[int, tuple[int, ...] | None]:
    if t <= probe_prefix:
        raise ValueError("t must exceed the probe prefix")
    anchor = _anchor if _anchor is not None else _hat_anchor(x, q, probe_prefix)
    sphere, first = anchor
    if sphere is None:
        return 0, None
    nbrs = x.adjacency.get(t, frozenset())
    hit = all(v in nbrs for v in sphere) and first is not None and t > first
    return int(hit), sphere


def _hat_anchor(x: SimplicialComplex, q: int, probe_prefix: int):
    sphere = first_induced_sphere(x, q - 1, probe_prefix)
    if sphere is None:
        return None, None
    return sphere, first_cone_node(x, sphere)


def b_IK_hat(x: SimplicialComplex, t: int, q: int, sphere: Sequence[int]) -> int:
    """Indicator that H_{q-1}(sphere) -> H_{q-1}(L(t)) has a one-dimensional kernel."""
    lk = link_at(x, t)
    if not all((v,) in lk for v in sphere):
        raise ValueError("the anchor sphere is not contained in the link")
    f = TwoStepFiltration(lk, induced(lk, sphere))
    _, kernel = induced_map_ranks(f, q - 1)
    return int(kernel == 1)


def _flag_prefix(x: SimplicialComplex, t: int, top: int) -> SimplicialComplex:
    adj = {v: frozenset(u for u in ns if u <= t) for v, ns in x.adjacency.items() if v <= t}
    return graph_clique_complex(adj, max_dim=top)


def mv_increment(x: SimplicialComplex, t: int, q: int) -> tuple[int, int]:
    """Both sides of beta_q(X^t) - beta_q(X^{t-1}) = rk ker f_{q-1} - rk im f_q."""
    if t < 2:
        raise ValueError("t must be >= 2")
    if q < 1:
        raise ValueError("q must be >= 1")
    if x.flag:
        before = _flag_prefix(x, t - 1, q + 2)
        after = _flag_prefix(x, t, q + 2)
        # same cap on both sides so the link stays a subcomplex of ``before``
        lk = graph_clique_complex(_lower_adjacency(x, t), max_dim=q + 1)
    else:
        before, after = prefix(x, t - 1), prefix(x, t)
        lk = link(after, t) if (t,) in after else SimplicialComplex.empty()
    lhs = betti(after, q) - betti(before, q)
    f = TwoStepFiltration(before, lk)
    _, kernel = induced_map_ranks(f, q - 1)
    image, _ = induced_map_ranks(f, q)
    return lhs, kernel - image


def geometric_checkpoints(T: int, per_decade: int = 20) -> list[int]:
    """Integer checkpoints evenly spaced in log10 between 1 and T (both included)."""
    if T < 1:
        raise ValueError("T must be >= 1")
    n = max(1, math.ceil(per_decade * math.log10(T)))
    pts = sorted({int(round(10 ** (k / per_decade))) for k in range(n + 1)} | {T})
    return [p for p in pts if 1 <= p <= T]


def betti_evolution(g: MultiDiGraph, q: int, checkpoints: Sequence[int]) -> list[tuple[int, int]]:
    if list(checkpoints) != sorted(checkpoints):
        raise ValueError("checkpoints must be sorted")
    x = clique_complex(simplify(g), q + 1)
    return list(zip(checkpoints, prefix_betti_curve(x, q, checkpoints)))


@dataclass
class LinkTrace:
    q: int
    u: np.ndarray
    bKL: np.ndarray
    ell_hat: np.ndarray
    bIK_hat: np.ndarray
    ell: np.ndarray | None = None
    bIK: np.ndarray | None = None
    checkpoints: list[tuple[int, int]] = field(default_factory=list)

    @property
    def T(self) -> int:
        return len(self.u)

    @property
    def upper(self) -> np.ndarray:
        return np.cumsum(self.u)

    @property
    def lower(self) -> np.ndarray:
        return np.cumsum(self.ell_hat - self.bIK_hat - self.bKL)

    @property
    def lower_exact(self) -> np.ndarray | None:
        if self.ell is None:
            return None
        return np.cumsum(self.ell - self.bIK - self.bKL)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "u", "bKL", "ell", "bIK", "ell_hat", "bIK_hat", "lower", "upper",
                    "betti_checkpoint", "lower_exact"])
        marks = dict(self.checkpoints)
        upper, lower, lower_exact = self.upper, self.lower, self.lower_exact
        for i in range(self.T):
            t = i + 1
            w.writerow([t, self.u[i], self.bKL[i],
                        "" if self.ell is None else self.ell[i],
                        "" if self.bIK is None else self.bIK[i],
                        self.ell_hat[i], self.bIK_hat[i], lower[i], upper[i],
                        marks.get(t, ""),
                        "" if lower_exact is None else lower_exact[i]])
        return buf.getvalue()

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_csv())


def link_trace(x: SimplicialComplex, q: int, T: int | None = None,
               probe_prefix: int = PROBE_PREFIX, exact_cap: int = EXACT_CAP,
               checkpoints: Sequence[int] | None = None) -> LinkTrace:
    """All per-node estimator values for t = 1..T.

    The relative-homology terms ``ell``/``bIK`` are only evaluated when
    ``T <= exact_cap``.  Betti numbers at ``checkpoints`` come from one
    arrival-ordered reduction of ``x`` (which must reach dimension q + 1).
    """
    if q < 2:
        raise ValueError("the link estimators are defined for q >= 2")
    T = max(x.vertices, default=0) if T is None else T
    u = np.zeros(T, dtype=np.int64)
    bkl = np.zeros(T, dtype=np.int64)
    ell_hat = np.zeros(T, dtype=np.int64)
    bik_hat = np.zeros(T, dtype=np.int64)
    exact = T <= exact_cap
    ell = np.zeros(T, dtype=np.int64) if exact else None
    bik = np.zeros(T, dtype=np.int64) if exact else None

    seeded = exact and _sphere_seed(x, q)
    anchor = _hat_anchor(x, q, probe_prefix)
    for t in range(1, T + 1):
        lk = link_at(x, t)
        u[t - 1] = betti(lk, q - 1)
        bkl[t - 1] = betti(lk, q)
        if seeded and t >= 2 * q + 2 and event_S(x, t, q):
            ell[t - 1] = 1
            bik[t - 1] = int(relative_betti(lk, induced(lk, range(1, 2 * q + 1)), q) > 0)
        if t > probe_prefix:
            hit, sphere = event_S_hat(x, t, q, probe_prefix, _anchor=anchor)
            if hit:
                ell_hat[t - 1] = 1
                bik_hat[t - 1] = b_IK_hat(x, t, q, sphere)

    marks: list[tuple[int, int]] = []
    if checkpoints:
        ts = [c for c in checkpoints if c <= T]
        marks = list(zip(ts, prefix_betti_curve(prefix(x, T), q, ts)))
    return LinkTrace(q, u, bkl, ell_hat, bik_hat, ell, bik, marks)


def bounds(x: SimplicialComplex, q: int, T: int | None = None,
           variant: str = "exact") -> tuple[np.ndarray, np.ndarray]:
    """Prefix-sum (lower, upper) curves over t = 1..T.

    ``variant`` picks the lower bound built from the exact event terms or from
    the hatted probe-prefix terms; the upper curve is always the sum of u.
    """
    tr = link_trace(x, q, T, exact_cap=EXACT_CAP if variant == "exact" else 0)
    if variant == "exact":
        if tr.lower_exact is None:
            raise ValueError("exact variant is limited to T <= EXACT_CAP")
        return tr.lower_exact, tr.upper
    if variant == "hatted":
        return tr.lower, tr.upper
    raise ValueError(f"unknown variant {variant!r}")
