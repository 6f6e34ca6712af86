from fractions import Fraction

import numpy as np
import pytest

from pa_topology.theory import (GrowthPrediction, PatternGraph, betti_exponent, chi, containment_exponents,
                                count_sequence, load_pattern, loads_pattern, phase_threshold, power,
                                prediction_record, regime, sphere_cone_pattern, square_cone_pattern)

EDGE = PatternGraph.from_edges(2, [(2, 1)])


def random_pattern(rng, m):
    n = int(rng.integers(1, 9))
    edges = {}
    for i in range(2, n + 1):
        budget = m
        for j in rng.permutation(np.arange(1, i)):
            if budget == 0 or rng.random() < 0.5:
                continue
            k = int(rng.integers(1, min(budget, 3) + 1))
            edges[(i, int(j))] = k
            budget -= k
    return PatternGraph(n, edges)


def test_chi_values():
    assert chi(-5, 7) == Fraction(2, 9)
    assert isinstance(chi(-5, 7), Fraction)
    for m in (1, 3, 10):
        assert chi(0, m) == Fraction(1, 2)
        assert chi(Fraction(-m, 2), m) == Fraction(1, 3)
    assert abs(chi(-2.5, 7) - (1 - 1 / (2 - 2.5 / 7))) < 1e-15
    for bad in (-7, -8):
        with pytest.raises(ValueError):
            chi(bad, 7)


def test_chi_monotone_and_in_range():
    m = 6
    ds = [Fraction(k, 4) - m for k in range(1, 4 * m)]
    vals = [chi(d, m) for d in ds]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert all(0 < v < Fraction(1, 2) for v in vals)


def test_power_examples():
    iso = PatternGraph(3, {(3, 1): 1})
    assert power(iso, 2, -5, 7) == 0
    last = sphere_cone_pattern(2)
    assert last.d_in(6) == 0 and last.d_out(6) == 4
    assert power(last, 6, -5, 7) == -4 * chi(-5, 7)
    assert power(EDGE, 1, -5, 7) == -(1 - chi(-5, 7))
    with pytest.raises(ValueError):
        power(EDGE, 3, -5, 7)


def test_count_sequence_single_edge():
    a, A, r = count_sequence(EDGE, -5, 7)
    c = chi(-5, 7)
    assert a == [2 - (1 - c) - c, 1 - c, 0]
    assert (A, r) == (1, 1)
    for d, m in [(0, 1), (-1, 2), (Fraction(5, 2), 3)]:
        assert count_sequence(EDGE, d, m)[1:] == (1, 1)


def test_count_sequence_rejects_large_out_degree():
    p = PatternGraph(2, {(2, 1): 3})
    with pytest.raises(ValueError):
        count_sequence(p, 0, 2)


def test_increments_on_random_patterns():
    rng = np.random.default_rng(5)
    for _ in range(300):
        m = int(rng.integers(1, 8))
        delta = Fraction(int(rng.integers(-4 * m + 1, 1)), 4)  # -m < delta <= 0
        p = random_pattern(rng, m)
        a, A, r = count_sequence(p, delta, m)
        c = chi(delta, m)
        assert a[-1] == 0 and A == max(a) and r == a.count(A)
        for k in range(1, p.n + 1):
            inc = a[k] - a[k - 1]
            if p.d_in(k) == 0:
                assert inc == p.degree(k) * c - 1
            else:
                assert inc >= (p.degree(k) - 2) * c


def test_containment_exponents():
    labels = [3, 5, 8, 9, 10, 40]
    ex = containment_exponents(sphere_cone_pattern(2), labels, -5, 7)
    assert ex[-1] == (40, -4 * chi(-5, 7))
    assert containment_exponents(PatternGraph(0), [], -5, 7) == []
    c = chi(-5, 7)
    assert containment_exponents(EDGE, [4, 9], -5, 7) == [(4, -(1 - c)), (9, -c)]
    with pytest.raises(ValueError):
        containment_exponents(EDGE, [9, 4], -5, 7)


def test_regimes():
    g = regime(2, -5, 7)
    assert g == GrowthPrediction(Fraction(1, 9), 1, "PowerLaw")
    assert regime(2, 0, 4).regime == "Bounded"
    assert regime(2, 0, 4).exponent == -1
    assert regime(1, -5, 7) == GrowthPrediction(1, 1, "PowerLaw")
    assert regime(0, -5, 7).regime == "Bounded"
    assert regime(2, -1, 3).regime == "Zero"
    for q in (2, 3, 4):
        m = 2 * q * 3 + 1
        d = -phase_threshold(q) * m
        at = regime(q, d, m)
        assert at.regime == "Logarithmic" and at.exponent == 0 and at.log_power == 2
        eps = Fraction(1, 10**9)
        assert regime(q, d - eps, m).regime == "PowerLaw"
        assert regime(q, d + eps, m).regime == "Bounded"
        assert betti_exponent(q, d, m) == 0


def test_phase_thresholds():
    assert [phase_threshold(q) for q in (2, 3, 4)] == [Fraction(2, 3), Fraction(4, 5), Fraction(6, 7)]
    vals = [phase_threshold(q) for q in range(2, 51)]
    assert all(b > a for a, b in zip(vals, vals[1:])) and vals[-1] < 1
    with pytest.raises(ValueError):
        phase_threshold(1)


def test_prediction_record():
    rec = prediction_record(2, Fraction(-5), 7)
    assert rec["regime"] == "PowerLaw"
    assert rec["exact"] == {"chi": "2/9", "exponent": "1/9", "threshold": "2/3"}
    assert set(rec) >= {"q", "delta", "m", "chi", "exponent", "regime", "threshold"}
    assert abs(rec["exponent"] - 1 / 9) < 1e-15


def test_square_cone_dominant_exponent():
    # square with one cone point: the last two terms carry the maximum
    a, A, r = count_sequence(square_cone_pattern(1), -5, 7)
    assert A == max(a[-2:]) and A == 1 - 4 * chi(-5, 7)


def test_pattern_parsing(tmp_path):
    p = loads_pattern("pattern v=3\n2 1 2\n3 1 1\n")
    assert p.edges == {(2, 1): 2, (3, 1): 1}
    assert loads_pattern(p.dumps()) == p
    (tmp_path / "p.txt").write_text(p.dumps())
    assert load_pattern(tmp_path / "p.txt") == p
    for bad in ("v=3\n", "pattern v=3\n1 2 1\n", "pattern v=3\n2 1\n"):
        with pytest.raises(ValueError):
            loads_pattern(bad)
    with pytest.raises(ValueError):
        PatternGraph(2, {(2, 2): 1})
    with pytest.raises(ValueError):
        PatternGraph(2, {(3, 1): 1})
