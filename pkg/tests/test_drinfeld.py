import random

import pytest

from weightfil.errors import EnumerationBudgetError, PreconditionError
from weightfil.drinfeld import (LatticeClass, SimplexType,
                                adjacency_subspace_dim, ball, gaussian_binomial,
                                hnf, simplices_through_vertex, stratum_type,
                                v_n_m, vertex_neighbors)


def test_gaussian_binomial_values():
    assert gaussian_binomial(3, 0, 2) == 1
    assert gaussian_binomial(2, 1, 2) == 3
    assert gaussian_binomial(3, 1, 2) == 7
    assert gaussian_binomial(4, 2, 3) == 130


def test_gaussian_binomial_symmetry():
    for n in range(1, 6):
        for k in range(0, n + 1):
            for q in (2, 3, 4):
                assert gaussian_binomial(n, k, q) == gaussian_binomial(n, n - k, q)


def test_gaussian_binomial_range():
    with pytest.raises(PreconditionError):
        gaussian_binomial(2, 3, 2)


def test_hnf_canonical():
    a = hnf([[2, 1], [0, 1]])
    b = hnf([[2, 0], [0, 1], [2, 1]][:2])
    assert a == hnf(list(a))
    assert hnf([[1, 0], [0, 1]]) == ((1, 0), (0, 1))


def test_lattice_class_canonical_per_homothety():
    p = 2
    v = LatticeClass.from_rows([[2, 0], [0, 2]], p)
    assert v == LatticeClass.base(1, p)
    w = LatticeClass.from_rows([[4, 0], [0, 2]], p)
    assert w == LatticeClass.from_rows([[2, 0], [0, 1]], p)


def test_neighbor_counts():
    assert len(vertex_neighbors(LatticeClass.base(1, 2), 2, 1)) == 3
    assert len(vertex_neighbors(LatticeClass.base(1, 3), 3, 1)) == 4
    assert len(vertex_neighbors(LatticeClass.base(2, 2), 2, 2)) == 14


def test_neighbor_count_formula():
    for d, p in ((1, 2), (1, 3), (2, 2), (2, 3)):
        expected = sum(gaussian_binomial(d + 1, s, p) for s in range(1, d + 1))
        assert len(vertex_neighbors(LatticeClass.base(d, p), p, d)) == expected


def test_ball_counts():
    assert len(ball(LatticeClass.base(1, 2), 2, 2, 1).vertices) == 10
    assert len(ball(LatticeClass.base(1, 3), 2, 3, 1).vertices) == 17
    assert len(ball(LatticeClass.base(2, 2), 0, 2, 2).vertices) == 1


def test_ball_tree_growth():
    for p in (2, 3):
        for n in (1, 2, 3):
            b = ball(LatticeClass.base(1, p), n, p, 1)
            assert len(b.vertices) == 1 + (p + 1) * (p ** n - 1) // (p - 1)


def test_ball_adjacency_symmetric_and_bounded():
    b = ball(LatticeClass.base(1, 2), 3, 2, 1)
    for e in b.adjacency:
        assert len(e) == 2
    for i, dist in b.distance.items():
        assert dist <= 3


def test_ball_budget_guard():
    with pytest.raises(EnumerationBudgetError):
        ball(LatticeClass.base(1, 3), 5, 3, 1, budget=20)


def test_neighbor_homogeneity_random_vertices():
    rng = random.Random(8)
    b = ball(LatticeClass.base(2, 2), 1, 2, 2)
    expected = 14
    picks = rng.sample(b.vertices, 5)
    for v in picks:
        assert len(vertex_neighbors(v, 2, 2)) == expected
    b1 = ball(LatticeClass.base(1, 3), 3, 3, 1)
    for v in rng.sample(b1.vertices, 8):
        assert len(vertex_neighbors(v, 3, 1)) == 4


def test_adjacency_subspace_dims():
    v0 = LatticeClass.base(2, 2)
    counts = {}
    for w in vertex_neighbors(v0, 2, 2):
        s = adjacency_subspace_dim(v0, w, 2)
        counts[s] = counts.get(s, 0) + 1
    assert counts == {1: 7, 2: 7}  # points and lines of the residue plane


def test_v_n_m_top_is_next_ball():
    b = ball(LatticeClass.base(1, 2), 2, 2, 1)
    got = v_n_m(b, 1, 1)  # m = d = 1
    want = sorted((v for i, v in enumerate(b.vertices) if b.distance[i] <= 2),
                  key=LatticeClass.sort_key)
    assert got == want


def test_v_n_m_point_type():
    b = ball(LatticeClass.base(2, 2), 1, 2, 2)
    got = v_n_m(b, 0, 1)
    assert len(got) == 1 + 7


def test_v_n_m_radius_guard():
    b = ball(LatticeClass.base(1, 2), 1, 2, 1)
    with pytest.raises(PreconditionError):
        v_n_m(b, 1, 1)


def test_simplices_through_vertex():
    assert simplices_through_vertex(2, 2, 1) == 1
    assert simplices_through_vertex(2, 2, 2) == 14
    assert simplices_through_vertex(2, 2, 3) == 21
    assert simplices_through_vertex(1, 3, 2) == 4


def test_simplices_range():
    with pytest.raises(PreconditionError):
        simplices_through_vertex(2, 2, 4)


def test_stratum_type():
    assert stratum_type(SimplexType(()), 2) == [2]
    assert stratum_type(SimplexType((1, 2)), 2) == [0, 0, 0]
    assert stratum_type(SimplexType((1,)), 2) == [0, 1]
    assert stratum_type(SimplexType((2,)), 4) == [1, 2]


def test_stratum_type_validation():
    with pytest.raises(PreconditionError):
        stratum_type(SimplexType((3,)), 2)
