import networkx as nx
import numpy as np
import pytest

from conftest import brute_betti, gamma_adjacency, random_adjacency, random_flag_complex
from pa_topology.complex import (SimplicialComplex, graph_clique_complex, induced, octahedral_ball,
                                 octahedral_sphere, prefix)
from pa_topology.homology import (ChainComplex, TwoStepFiltration, betti, betti_numbers,
                                  clique_minimal_search, euler_characteristic, induced_map_ranks,
                                  is_clique_minimal, prefix_betti_curve, reduce_columns, relative_betti)
from pa_topology.pa_graph import PAParams, generate, simplify
from pa_topology.complex import clique_complex


@pytest.mark.parametrize("n", range(0, 5))
def test_sphere_and_ball_tables(n):
    s = octahedral_sphere(n)
    assert [betti(s, q) for q in range(6)] == [1 if q in (0, n) else 0 for q in range(6)] if n else \
        [betti(s, q) for q in range(6)] == [2, 0, 0, 0, 0, 0]
    d = octahedral_ball(n)
    assert [betti(d, q) for q in range(6)] == [1, 0, 0, 0, 0, 0]
    assert euler_characteristic(d) == 1
    assert euler_characteristic(s) == (1 + (-1) ** n)


def test_zero_sphere_has_two_points():
    # two antipodal points: beta_0 = 2 (reduced homology would give 1)
    assert betti_numbers(octahedral_sphere(0)) == [2]


@pytest.mark.parametrize("k", range(1, 6))
def test_square_with_cones(k):
    x = graph_clique_complex(gamma_adjacency(k))
    assert betti(x, 2) == k - 1
    assert betti(x, 1) == 0


def test_single_vertex():
    v = SimplicialComplex.from_simplices([(1,)], max_dim=2)
    assert betti(v, 0) == 1 and betti(v, 1) == 0 and betti(v, 2) == 0


def test_cap_too_low_raises():
    full = graph_clique_complex({1: {2, 3}, 2: {1, 3}, 3: {1, 2}}, max_dim=1)
    with pytest.raises(ValueError):
        betti(full, 1)
    with pytest.raises(ValueError):
        betti(full, -1)


def test_euler_of_sphere():
    assert euler_characteristic(octahedral_sphere(2)) == 2
    assert octahedral_sphere(2).f_vector == (6, 12, 8)


def test_engine_matches_dense_oracle(rng):
    for _ in range(200):
        n = int(rng.integers(1, 13))
        x = random_flag_complex(rng, n, float(rng.uniform(0.2, 0.9)))
        b = betti_numbers(x)
        assert b == [brute_betti(x, q) for q in range(len(b))]
        assert sum((-1) ** q * v for q, v in enumerate(b)) == euler_characteristic(x)


def test_boundary_squares_to_zero(rng):
    for _ in range(30):
        x = random_flag_complex(rng, 9, 0.6)
        assert ChainComplex.from_complex(x).boundary_squared_is_zero()


def test_boundary_dump():
    cc = ChainComplex.from_complex(SimplicialComplex.from_simplices([(1, 2, 3)]))
    assert cc.dump(2) == "1\n1\n1"
    assert cc.dump(1).splitlines()[0] == "11."


def test_reduce_columns_lows():
    # columns as bitsets: 0b011, 0b110, 0b101 -> third reduces to zero
    assert reduce_columns([0b011, 0b110, 0b101]) == [1, 2, -1]


def test_relative_trivial_pairs(rng):
    for _ in range(20):
        x = random_flag_complex(rng, 9, 0.5)
        empty = SimplicialComplex.empty(x.max_dim)
        for q in range(3):
            assert relative_betti(x, x, q) == 0
            assert relative_betti(x, empty, q) == betti(x, q)


def test_relative_matches_oracle_and_les_bound(rng):
    for _ in range(200):
        n = int(rng.integers(3, 11))
        x = random_flag_complex(rng, n, float(rng.uniform(0.3, 0.8)))
        verts = [v for v in x.vertices if rng.random() < 0.5]
        if not verts:
            continue
        a = induced(x, verts)
        for q in range(0, 3):
            r = relative_betti(x, a, q)
            assert r == brute_betti(x, q, a)
            lower_a = betti(a, q - 1) if q >= 1 else 0
            assert r <= betti(x, q) + lower_a


def test_relative_rejects_non_subcomplex():
    x = SimplicialComplex.from_simplices([(1, 2)])
    a = SimplicialComplex.from_simplices([(1, 3)])
    with pytest.raises(ValueError):
        relative_betti(x, a, 0)
    with pytest.raises(ValueError):
        TwoStepFiltration(x, a)
    bad = SimplicialComplex.from_simplices([(1, 2)], close=False)
    with pytest.raises(ValueError):
        relative_betti(x, bad, 0)


def test_relative_disc_pair(instant_kill_complex):
    from pa_topology.estimators import link_at
    lk = link_at(instant_kill_complex, 6)
    assert relative_betti(lk, prefix(lk, 4), 2) == 1


def test_induced_map_examples():
    cone = octahedral_ball(2)
    square = induced(cone, [1, 2, 3, 4])
    assert induced_map_ranks(TwoStepFiltration(cone, square), 1) == (0, 1)
    s2 = octahedral_sphere(2)
    assert induced_map_ranks(TwoStepFiltration(s2, s2), 2) == (1, 0)
    # equator of the octahedron: vertices 1,2,4,5 (opposites 1-4, 2-5)
    equator = induced(s2, [1, 2, 4, 5])
    assert betti(equator, 1) == 1
    assert induced_map_ranks(TwoStepFiltration(s2, equator), 1) == (0, 1)


def _brute_induced_rank(x, a, q):
    """rank of H_q(A) -> H_q(X) = dim(Z_q(A) + B_q(X)) - dim B_q(X), via dense ranks."""
    from conftest import dense_boundary, gf2_rank
    lower_x = list(x.dim_simplices(q))
    idx = {s: i for i, s in enumerate(lower_x)}
    bx = dense_boundary(lower_x, list(x.dim_simplices(q + 1))) if x.dim_simplices(q + 1) else \
        np.zeros((len(lower_x), 0), dtype=np.uint8)
    # cycles of A expressed in X's q-chains: null space of A's boundary
    aq = list(a.dim_simplices(q))
    if q > 0 and aq:
        da = dense_boundary(list(a.dim_simplices(q - 1)), aq)
    else:
        da = np.zeros((0, len(aq)), dtype=np.uint8)
    basis = _gf2_nullspace(da, len(aq))
    za = np.zeros((len(lower_x), len(basis)), dtype=np.uint8)
    for j, vec in enumerate(basis):
        for i, s in enumerate(aq):
            if vec[i]:
                za[idx[s], j] = 1
    return gf2_rank(np.hstack([za, bx])) - gf2_rank(bx)


def _gf2_nullspace(mat, ncols):
    if ncols == 0:
        return []
    a = (np.asarray(mat, dtype=np.uint8) & 1).copy().reshape(-1, ncols)
    rows = a.shape[0]
    pivots = []
    r = 0
    for c in range(ncols):
        hit = [i for i in range(r, rows) if a[i, c]]
        if not hit:
            continue
        a[[r, hit[0]]] = a[[hit[0], r]]
        for i in range(rows):
            if i != r and a[i, c]:
                a[i] ^= a[r]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(ncols, dtype=np.uint8)
        v[f] = 1
        for i, p in enumerate(pivots):
            v[p] = a[i, f]
        basis.append(v)
    return basis


def test_induced_map_rank_nullity_and_oracle(rng):
    for _ in range(150):
        n = int(rng.integers(3, 10))
        x = random_flag_complex(rng, n, float(rng.uniform(0.3, 0.85)))
        verts = [v for v in x.vertices if rng.random() < 0.6]
        if not verts:
            continue
        a = induced(x, verts)
        for q in range(0, 3):
            image, kernel = induced_map_ranks(TwoStepFiltration(x, a), q)
            assert image + kernel == betti(a, q)
            assert image == _brute_induced_rank(x, a, q)


def test_prefix_curve_matches_prefix_complexes():
    x = clique_complex(simplify(generate(PAParams(150, 5, -3, seed=4))), 3)
    times = [1, 5, 10, 30, 60, 100, 150]
    for q in (0, 1, 2):
        assert prefix_betti_curve(x, q, times) == [betti(prefix(x, t), q) for t in times]


def test_sphere_is_clique_minimal():
    assert is_clique_minimal(octahedral_sphere(1), SimplicialComplex.empty(), 1)
    assert is_clique_minimal(octahedral_sphere(2), SimplicialComplex.empty(), 2)
    assert not is_clique_minimal(octahedral_ball(2), SimplicialComplex.empty(), 2)
    assert not is_clique_minimal(octahedral_ball(1), SimplicialComplex.empty(), 1)
    # the disc with the sphere removed from homology: Gamma_2 carries beta_2 but is not minimal-free
    g2 = graph_clique_complex(gamma_adjacency(2))
    assert is_clique_minimal(g2, SimplicialComplex.empty(), 2)


def test_clique_minimal_relative_and_zero():
    # a pair of points is (empty, 0)-minimal only as a single vertex
    pt = SimplicialComplex.from_simplices([(1,)])
    assert is_clique_minimal(pt, SimplicialComplex.empty(), 0)
    two = SimplicialComplex.from_simplices([(1,), (2,)])
    assert not is_clique_minimal(two, SimplicialComplex.empty(), 0)
    # relative to the square, the cone over it is (square, 2)-minimal
    cone = octahedral_ball(2)
    assert is_clique_minimal(cone, induced(cone, [1, 2, 3, 4]), 2)


def test_clique_minimal_size_guard():
    big = graph_clique_complex({v: {u for u in range(1, 9) if u != v} for v in range(1, 9)})
    with pytest.raises(ValueError):
        is_clique_minimal(big, SimplicialComplex.empty(), 2, max_free_edges=10)


def test_minimal_search_small():
    cycles = clique_minimal_search(6, 1)
    sizes = sorted(len(g) for g in cycles)
    assert sizes == [4, 5, 6]
    for g in cycles:
        G = nx.Graph([(u, v) for u in g for v in g[u]])
        assert nx.is_isomorphic(G, nx.cycle_graph(len(g)))
    two = clique_minimal_search(6, 2)
    assert len(two) == 1
    x = graph_clique_complex(two[0])
    assert len(x.vertices) == 6 and x.f_vector[:3] == (6, 12, 8) and x.dimension == 2
    assert is_clique_minimal(x, SimplicialComplex.empty(), 2)
