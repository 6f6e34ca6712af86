"""Closed-form growth predictions for preferential attachment graphs and their clique complexes.

All quantities are exact ``Fraction``s when ``delta`` and ``m`` are integers or
fractions, so regime boundaries are decided without round-off.  Floats are
accepted too and propagate as floats.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from pathlib import Path
from typing import Iterable, Mapping, Sequence

Number = Fraction | float


def _exact(x):
    return Fraction(x) if isinstance(x, Rational) else x


@dataclass(frozen=True)
class PatternGraph:
    """Small ordered directed multigraph on vertices 1..n.

    ``edges`` maps ``(i, j)`` with ``i > j`` to a multiplicity; edges point
    from the later vertex to the earlier one, like attachment edges.
    """

    n: int
    edges: Mapping[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        clean: dict[tuple[int, int], int] = {}
        for (i, j), k in self.edges.items():
            if i == j:
                raise ValueError("self-loops are not allowed")
            if not self.n >= i > j >= 1:
                raise ValueError(f"edge {i}->{j} must go from a later to an earlier vertex in 1..{self.n}")
            if k < 1:
                raise ValueError("multiplicity must be positive")
            clean[(i, j)] = clean.get((i, j), 0) + k
        object.__setattr__(self, "edges", dict(sorted(clean.items())))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int] | tuple[int, int, int]]) -> "PatternGraph":
        acc: dict[tuple[int, int], int] = {}
        for e in edges:
            i, j = e[0], e[1]
            k = e[2] if len(e) > 2 else 1
            if i < j:
                i, j = j, i
            acc[(i, j)] = acc.get((i, j), 0) + k
        return cls(n, acc)

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    def d_in(self, v: int) -> int:
        return sum(k for (_, j), k in self.edges.items() if j == v)

    def d_out(self, v: int) -> int:
        return sum(k for (i, _), k in self.edges.items() if i == v)

    def degree(self, v: int) -> int:
        return self.d_in(v) + self.d_out(v)

    @property
    def max_out_degree(self) -> int:
        return max((self.d_out(v) for v in self.vertices), default=0)

    def dumps(self) -> str:
        lines = [f"pattern v={self.n}"] + [f"{i} {j} {k}" for (i, j), k in self.edges.items()]
        return "\n".join(lines) + "\n"


def loads_pattern(text: str) -> PatternGraph:
    lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines or len(lines[0]) != 2 or lines[0][0] != "pattern" or not lines[0][1].startswith("v="):
        raise ValueError("missing 'pattern v=<n>' header")
    n = int(lines[0][1][2:])
    edges: dict[tuple[int, int], int] = {}
    for row in lines[1:]:
        if len(row) != 3:
            raise ValueError(f"expected 'i j mult', got {' '.join(row)!r}")
        i, j, k = map(int, row)
        if i <= j:
            raise ValueError(f"pattern edge {i} {j} must have i > j")
        edges[(i, j)] = edges.get((i, j), 0) + k
    return PatternGraph(n, edges)


def load_pattern(path: str | Path) -> PatternGraph:
    return loads_pattern(Path(path).read_text())


def square_cone_pattern(k: int) -> PatternGraph:
    """Chordless square 1-2-3-4 (opposite pairs 1,3 and 2,4) plus ``k`` cone vertices after it."""
    edges = [(2, 1), (3, 2), (4, 3), (4, 1)]
    for c in range(5, 5 + k):
        edges += [(c, v) for v in range(1, 5)]
    return PatternGraph.from_edges(4 + k, edges)


def sphere_cone_pattern(q: int) -> PatternGraph:
    """Octahedral (q-1)-sphere on 1..2q, coned by 2q+1 and by a later node 2q+2."""
    n = 2 * q
    edges = [(u, v) for u in range(1, n + 1) for v in range(1, u) if u - v != q]
    for apex in (n + 1, n + 2):
        edges += [(apex, v) for v in range(1, n + 1)]
    return PatternGraph.from_edges(n + 2, edges)


@dataclass(frozen=True)
class GrowthPrediction:
    """Growth T^exponent (log T)^(log_power - 1); ``Zero`` means identically 0."""

    exponent: Number
    log_power: int
    regime: str

    def __post_init__(self):
        if self.regime not in ("PowerLaw", "Logarithmic", "Bounded", "Zero"):
            raise ValueError(f"unknown regime {self.regime!r}")
        if self.log_power < 1:
            raise ValueError("log_power must be a positive integer")


def chi(delta, m) -> Number:
    """Attachment exponent ``1 - 1 / (2 + delta/m)``."""
    delta, m = _exact(delta), _exact(m)
    if m <= 0:
        raise ValueError("m must be positive")
    if not delta > -m:
        raise ValueError(f"delta must exceed -m = {-m}")
    return 1 - 1 / (2 + delta / m)


def power(p: PatternGraph, v: int, delta, m) -> Number:
    if v not in p.vertices:
        raise ValueError(f"vertex {v} is not in the pattern")
    c = chi(delta, m)
    return -((1 - c) * p.d_in(v) + c * p.d_out(v))


def count_sequence(p: PatternGraph, delta, m) -> tuple[list[Number], Number, int]:
    """Exponent sequence a_0..a_n with its maximum A and number of maximizers r.

    The expected number of copies of ``p`` grows like T^A (log T)^(r-1).
    """
    if p.max_out_degree > _exact(m):
        raise ValueError(f"pattern out-degree {p.max_out_degree} exceeds m = {m}")
    n = p.n
    powers = [power(p, v, delta, m) for v in p.vertices]
    a: list[Number] = []
    tail = 0
    # walk backwards so each term reuses the suffix sum of powers
    for k in range(n, -1, -1):
        if k < n:
            tail = tail + powers[k]
        a.append(n - k + tail)
    a.reverse()
    assert a[n] == 0
    top = max(a)
    r = sum(1 for x in a if x == top)
    return a, top, r


def containment_exponents(p: PatternGraph, labels: Sequence[int], delta, m) -> list[tuple[int, Number]]:
    """Pairs (label, power) whose product of label**power gives the containment probability up to constants."""
    if len(labels) != p.n:
        raise ValueError("need one label per pattern vertex")
    if any(b <= a for a, b in zip(labels, labels[1:])):
        raise ValueError("labels must be strictly increasing")
    return [(lab, power(p, v, delta, m)) for v, lab in zip(p.vertices, labels)]


def phase_threshold(q: int) -> Fraction:
    """Value of -delta/m at which the q-th Betti exponent 1 - 2q chi vanishes."""
    if q < 2:
        raise ValueError("q must be >= 2")
    return Fraction(2 * q - 2, 2 * q - 1)


def betti_exponent(q: int, delta, m) -> Number:
    return 1 - 2 * q * chi(delta, m)


def regime(q: int, delta, m) -> GrowthPrediction:
    """Growth of the expected q-th Betti number of the clique complex."""
    if q < 0:
        raise ValueError("q must be >= 0")
    c = chi(delta, m)  # validates delta
    if q == 0:
        return GrowthPrediction(_exact(0), 1, "Bounded")
    if q == 1:
        return GrowthPrediction(_exact(1), 1, "PowerLaw")
    if m < 2 * q:
        return GrowthPrediction(_exact(0), 1, "Zero")
    a = 1 - 2 * q * c
    if a > 0:
        return GrowthPrediction(a, 1, "PowerLaw")
    if a == 0:
        return GrowthPrediction(a, 2, "Logarithmic")
    return GrowthPrediction(a, 1, "Bounded")


def prediction_record(q: int, delta, m) -> dict:
    """JSON-ready summary; floats for plotting plus exact strings where available."""
    g = regime(q, delta, m)
    c = chi(delta, m)
    thr = phase_threshold(q) if q >= 2 else None
    rec = {
        "q": q,
        "delta": float(delta),
        "m": m,
        "chi": float(c),
        "exponent": float(g.exponent),
        "regime": g.regime,
        "threshold": None if thr is None else float(thr),
    }
    if isinstance(c, Fraction):
        rec["exact"] = {"chi": str(c), "exponent": str(g.exponent),
                        "threshold": None if thr is None else str(thr)}
    return rec
