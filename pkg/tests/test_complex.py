import random

import pytest

from lextri.complex import (
    FacetViolation,
    PartialComplex,
    Triangulation,
    cycle_order,
    is_strongly_connected,
    is_two_sphere,
    link_is_sphere,
    link_of_vertex,
    pack,
    verify_manifold,
)

TETRA = [(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)]
RP2 = [(1, 2, 3), (1, 2, 4), (1, 3, 5), (1, 4, 6), (1, 5, 6),
       (2, 3, 6), (2, 4, 5), (2, 5, 6), (3, 4, 5), (3, 4, 6)]


def snapshot(K):
    return (list(K.facets), list(K.packed), list(K.ridge_use), list(K.vertex_degree),
            list(K.open_ridges), K.used_vertex_count, K.max_label, K.open_ridge_total,
            [list(s) for s in K.star])


def test_pack_orders_like_tuples():
    fs = [(1, 2, 3), (1, 2, 10), (1, 3, 4), (2, 3, 4), (1, 9, 200)]
    assert sorted(fs, key=pack) == sorted(fs)


def test_closing_the_tetrahedron():
    K = PartialComplex(2, 6, TETRA[:3])
    assert not K.is_closed()
    newly = K.add_facet((2, 3, 4))
    assert sorted(newly) == [2, 3, 4]
    assert K.is_closed()
    assert K.used_vertex_count == 4
    assert [K.vertex_state(v) for v in range(1, 7)] == ["closed"] * 4 + ["unused"] * 2


def test_facet_must_be_lex_greater():
    K = PartialComplex(2, 6, TETRA[:3])
    with pytest.raises(ValueError):
        K.add_facet((1, 3, 4))


def test_closed_vertex_violation():
    K = PartialComplex(2, 6, TETRA)
    with pytest.raises(FacetViolation) as exc:
        K.add_facet((2, 3, 5))
    assert exc.value.kind == "closed_vertex"
    assert exc.value.items == (2, 3)


def test_ridge_overuse_violation():
    K = PartialComplex(2, 6, [(1, 2, 3), (1, 2, 4)])
    with pytest.raises(FacetViolation) as exc:
        K.add_facet((1, 2, 5))
    assert exc.value.kind == "ridge_overuse"


def test_malformed_facets():
    K = PartialComplex(2, 6)
    for bad in [(1, 1, 2), (2, 1, 3), (1, 2), (1, 2, 7), (0, 1, 2)]:
        with pytest.raises(ValueError):
            K.add_facet(bad)


def test_add_then_remove_restores_everything():
    K = PartialComplex(2, 6, TETRA[:3])
    before = snapshot(K)
    K.add_facet((2, 3, 5))
    K.remove_last_facet()
    assert snapshot(K) == before


def test_remove_last_to_empty():
    K = PartialComplex(2, 5, [(1, 2, 3)])
    K.remove_last_facet()
    assert K.facets == [] and K.used_vertex_count == 0 and K.max_label == 0
    with pytest.raises(IndexError):
        K.remove_last_facet()


@pytest.mark.parametrize("dim", [2, 3])
def test_random_add_remove_matches_recount(dim):
    rng = random.Random(7 + dim)
    n = 9
    K = PartialComplex(dim, n)
    for _ in range(1000):
        if K.facets and rng.random() < 0.45:
            K.remove_last_facet()
            continue
        f = tuple(sorted(rng.sample(range(1, n + 1), dim + 1)))
        try:
            K.add_facet(f)
        except (ValueError, FacetViolation):
            pass
    K.check_consistency()
    use, deg, open_r = K.recount()
    assert use == K.ridge_use and deg == K.vertex_degree and open_r == K.open_ridges


def test_links():
    assert cycle_order(link_of_vertex(TETRA, 1)) is not None
    assert sorted(link_of_vertex(TETRA, 1)) == [(2, 3), (2, 4), (3, 4)]
    K = PartialComplex(2, 6, TETRA[:3])
    assert K.link(2) == [(1, 3), (1, 4)]
    assert cycle_order(K.link(2)) is None
    for v in range(1, 7):
        assert cycle_order(link_of_vertex(RP2, v)) is not None
        assert len(link_of_vertex(RP2, v)) == 5


def test_link_is_sphere():
    assert link_is_sphere([(1, 2), (1, 3), (2, 3)])
    assert not link_is_sphere([(1, 2), (1, 3), (2, 3), (4, 5), (4, 6), (5, 6)])
    assert is_two_sphere(TETRA)
    assert not link_is_sphere(RP2)


def test_strong_connectivity():
    assert is_strongly_connected([(1, 2, 3), (1, 2, 4), (1, 3, 4)])
    joined = [(1, 2, 3), (1, 2, 4), (1, 3, 5), (1, 4, 5), (2, 3, 6), (2, 4, 6), (3, 4, 7), (3, 4, 8)]
    assert not is_strongly_connected(joined)


def test_verify_manifold():
    verify_manifold(TETRA)
    verify_manifold(RP2)
    with pytest.raises(ValueError):
        verify_manifold([(1, 2, 3), (1, 2, 4)])
    # two tetrahedra glued at a vertex: closed but the vertex link is two circles
    pinched = TETRA + [(1, 5, 6), (1, 5, 7), (1, 6, 7), (5, 6, 7)]
    with pytest.raises(ValueError):
        verify_manifold(sorted(pinched))


def test_triangulation_from_facets():
    T = Triangulation.from_facets([(4, 3, 2), (1, 2, 3), (1, 2, 4), (1, 3, 4)])
    assert T.facets == tuple(TETRA)
    assert T.f_vector == (4, 6, 4) and T.n == 4 and T.dim == 2
