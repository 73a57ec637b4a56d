import pytest

from weightfil.arrangements import (_gysin_betti, all_hyperplane_normals,
                                    blowup_poincare, point_count_oracle,
                                    rational_arrangement_poincare)
from weightfil.errors import PreconditionError
from weightfil.galois import GF


def test_line_cases():
    assert rational_arrangement_poincare(1, 2) == (1, 2)
    assert rational_arrangement_poincare(1, 3) == (1, 3)


def test_plane_q2():
    assert rational_arrangement_poincare(2, 2) == (1, 6, 8)


def test_plane_closed_form():
    for q in (2, 3, 4):
        assert rational_arrangement_poincare(2, q) == (1, q * q + q, q ** 3)


def test_methods_agree_r_up_to_3():
    # rational_arrangement_poincare raises CrossCheckError on disagreement,
    # so a clean return certifies gysin == mobius
    for r in (1, 2, 3):
        for q in (2, 3, 4):
            b = rational_arrangement_poincare(r, q)
            assert len(b) == r + 1 and b[0] == 1


def test_hyperplane_count():
    gf = GF(3)
    assert len(all_hyperplane_normals(gf, 3)) == 13  # (q^3-1)/(q-1)


def test_point_count_identity_arrangements():
    # #X(F_{q^s}) = sum_m (-1)^m b_m q^(s (r - m)) under maximal-weight purity
    for r, q in ((1, 2), (1, 3), (2, 2), (2, 3)):
        b = rational_arrangement_poincare(r, q)
        for s in (1, 2):
            expected = sum((-1) ** m * c * q ** (s * (r - m))
                           for m, c in enumerate(b))
            assert point_count_oracle(("arrangement_complement", r), q, s) == expected


def test_arrangement_examples():
    assert point_count_oracle(("arrangement_complement", 1), 2, 1) == 0
    assert point_count_oracle(("arrangement_complement", 1), 2, 2) == 2


def test_blowup_small():
    assert blowup_poincare(0, 2) == (1,)
    assert blowup_poincare(1, 2) == (1, 0, 1)
    assert blowup_poincare(2, 2) == (1, 0, 8, 0, 1)
    assert blowup_poincare(2, 3) == (1, 0, 14, 0, 1)


def test_blowup_pattern():
    for q in (2, 3, 4):
        assert blowup_poincare(2, q) == (1, 0, q * q + q + 2, 0, 1)


def test_blowup_point_counts():
    assert point_count_oracle(("iterated_blowup", 2), 2, 1) == 21
    for q in (2, 3):
        b = blowup_poincare(2, q)
        for s in (1, 2, 3):
            val = sum(c * (q ** s) ** (m // 2) for m, c in enumerate(b) if m % 2 == 0)
            assert val == point_count_oracle(("iterated_blowup", 2), q, s)


def test_blowup_even_degrees_only():
    for r in (0, 1, 2, 3):
        b = blowup_poincare(r, 2)
        assert all(b[m] == 0 for m in range(1, len(b), 2))
        assert b[0] == 1


def test_oracle_spec_validation():
    with pytest.raises(PreconditionError):
        point_count_oracle(("unknown", 2), 2, 1)
    with pytest.raises(PreconditionError):
        point_count_oracle(("iterated_blowup", 2), 2, 0)


def test_gysin_memo_subarrangements():
    # deleting hyperplanes one at a time keeps purity: spot-check a proper
    # sub-arrangement of the line against a direct count
    gf = GF(3)
    normals = all_hyperplane_normals(gf, 2)
    sub = frozenset(list(normals)[:2])   # two points removed from P^1
    betti = _gysin_betti(gf, 1, sub, {})
    assert betti == (1, 1)  # P^1 minus two points is the multiplicative line
