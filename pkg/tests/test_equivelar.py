import pytest

from lextri.equivelar import (
    EquivelarSpec,
    TorusFamily,
    admissible_pairs,
    admissible_triples,
    dual_type,
    enumerate_equivelar,
    pairs_for,
)

# admissible (n, q) per Euler characteristic, as tabulated for chi in 2..-10
PAIRS = {
    2: [(4, 3), (6, 4), (12, 5)],
    1: [(6, 5)],
    -1: [],
    -2: [(12, 7)],
    -3: [(9, 8), (18, 7)],
    -4: [(12, 8), (24, 7)],
    -5: [(10, 9), (15, 8), (30, 7)],
    -6: [(12, 9), (18, 8), (36, 7)],
    -7: [(14, 9), (21, 8), (42, 7)],
    -8: [(12, 10), (16, 9), (24, 8), (48, 7)],
    -9: [(18, 9), (27, 8), (54, 7)],
    -10: [(12, 11), (15, 10), (20, 9), (30, 8), (60, 7)],
}


@pytest.mark.parametrize("chi", sorted(PAIRS))
def test_admissible_pairs(chi):
    assert admissible_pairs(chi) == PAIRS[chi]


def test_pairs_satisfy_euler_relation():
    for chi in range(-40, 3):
        if chi == 0:
            continue
        for n, q in admissible_pairs(chi):
            assert q == 6 - 6 * chi / n and q >= 3 and n >= q + 1


def test_torus_family():
    fam = admissible_pairs(0)
    assert isinstance(fam, TorusFamily)
    assert fam.materialize(9) == [(7, 6), (8, 6), (9, 6)]


def test_admissible_triples():
    assert admissible_triples(-1) == []
    assert admissible_triples(-2) == [(3, 7, 12), (7, 3, 28)]
    assert admissible_triples(-3) == [(3, 8, 9), (8, 3, 24), (3, 7, 18), (7, 3, 42), (4, 5, 12), (5, 4, 15)]
    assert admissible_triples(-4) == [(3, 8, 12), (8, 3, 32), (3, 7, 24), (7, 3, 56), (4, 5, 16), (5, 4, 20)]
    with pytest.raises(ValueError):
        admissible_triples(0)


def test_triples_are_closed_under_duality():
    for chi in range(-1, -16, -1):
        triples = set(admissible_triples(chi))
        for p, q, n in triples:
            spec = EquivelarSpec(p, q, n, chi)
            d = dual_type(spec)
            assert (d.p, d.q, d.n) in triples
            assert dual_type(d) == spec
            assert n > 2 * p and n >= q + 1


def test_pairs_appear_among_triangle_triples():
    for chi in range(-1, -11, -1):
        triangles = {(n, q) for p, q, n in admissible_triples(chi) if p == 3}
        for n, q in admissible_pairs(chi):
            if n > 6:
                assert (n, q) in triangles


def test_dual_type():
    assert dual_type(EquivelarSpec(3, 7, 12, -2)) == EquivelarSpec(7, 3, 28, -2)
    assert dual_type(EquivelarSpec(4, 5, 12, -3)) == EquivelarSpec(5, 4, 15, -3)
    with pytest.raises(ValueError):
        EquivelarSpec(3, 7, 13, -2)


def test_pairs_for():
    assert pairs_for(0, 9) == [(7, 6), (8, 6), (9, 6)]
    assert pairs_for(-5, 12) == [(10, 9)]
    with pytest.raises(ValueError):
        pairs_for(0)


def test_small_equivelar_runs():
    torus7 = list(enumerate_equivelar(7, 6))
    assert len(torus7) == 1 and torus7[0][1].orientable and torus7[0][1].genus == 1
    types = sorted((t.orientable, t.genus) for _, t in enumerate_equivelar(9, 6))
    assert types == [(False, 2), (True, 1), (True, 1)]
    for T, t in enumerate_equivelar(9, 8):
        assert (t.euler, t.orientable, t.genus) == (-3, False, 5)
        assert all(sum(1 for f in T.facets if v in f) == 8 for v in range(1, 10))
    with pytest.raises(ValueError):
        list(enumerate_equivelar(8, 7))


def test_klein_bottles_exist_exactly_for_composite_n():
    for n in range(7, 17):
        klein = any(not t.orientable for _, t in enumerate_equivelar(n, 6))
        composite = any(n % d == 0 for d in range(2, n))
        assert klein == (n >= 9 and composite), n


def test_total_equivelar_up_to_11_vertices():
    total = 0
    for chi in range(2, -20, -1):
        for n, q in pairs_for(chi, 11):
            if chi == 0 or (n * q) % 3 == 0:
                total += sum(1 for _, t in enumerate_equivelar(n, q) if t.euler == chi)
    assert total == 27
