"""Lexicographically minimal relabelings of partial and complete complexes.

Candidate relabelings are seeded at a closed vertex ``v`` that could play the
role of vertex 1: for surfaces ``v -> 1``, a neighbour ``w -> 2`` and the two
apexes over the edge ``vw`` to 3 and 4 in either order; for 3-manifolds ``v``
goes to 1 and its link sphere is mapped onto vertex 1's link by one of the
labelings realising that sphere's canonical form.  The seed is then extended
vertex by vertex in new-label order.  At each vertex the unlabeled link
vertices receive the next free labels greedily, always completing the
smallest not-yet-determined facet first; genuine ties are branched.
"""
from __future__ import annotations

from collections.abc import Callable, Mapping, Sequence
from typing import Iterable

from .complex import Facet, PartialComplex, cycle_order, link_of_vertex, pack, verify_manifold

_INF = 1 << 30

LinkFn = Callable[[int], Sequence[Facet]]
ClosedFn = Callable[[int], bool]


def apply_relabeling(facets: Iterable[Sequence[int]], r) -> list[Facet]:
    """Relabel every vertex ``x`` as ``r[x]``; returns the sorted facet list.

    ``r`` is a mapping or a sequence indexed by old label (index 0 unused).
    It must be injective on the vertices that occur.
    """
    fs = [tuple(f) for f in facets]
    verts = sorted({x for f in fs for x in f})
    try:
        image = [r[x] for x in verts]
    except (KeyError, IndexError) as exc:
        raise ValueError(f"relabeling does not cover vertex {exc}") from None
    if len(set(image)) != len(image) or min(image, default=1) < 1:
        raise ValueError("relabeling is not a bijection onto positive labels")
    return sorted(tuple(sorted(r[x] for x in f)) for f in fs)


def invert_relabeling(r: Mapping[int, int]) -> dict[int, int]:
    inv = {b: a for a, b in r.items()}
    if len(inv) != len(r):
        raise ValueError("relabeling is not injective")
    return inv


# -- greedy extension ---------------------------------------------------------


class CycleLink(tuple):
    """Link of a surface vertex, stored as its vertices in cyclic order."""

    def edges(self) -> list[Facet]:
        d = len(self)
        return sorted(tuple(sorted((self[i], self[(i + 1) % d]))) for i in range(d))


def _label_cycle(cyc: CycleLink, lab: list[int], inv: list[int], nxt: int):
    # same greedy rule as the general case: the smallest labeled vertex with
    # an unlabeled cycle neighbour hands the next label to that neighbour
    d = len(cyc)
    unknown = 0
    for x in cyc:
        if not lab[x]:
            unknown += 1
    while unknown:
        best = 0
        bi = -1
        prev = lab[cyc[-1]]
        for i in range(d):
            cur = lab[cyc[i]]
            if cur and (best == 0 or cur < best) and (not prev or not lab[cyc[(i + 1) % d]]):
                best = cur
                bi = i
            prev = cur
        if bi < 0:
            return _label_link(cyc.edges(), lab, inv, nxt)
        left = cyc[bi - 1]
        right = cyc[(bi + 1) % d]
        if lab[left] or lab[right]:
            u = right if lab[left] else left
            lab[u] = nxt
            inv[nxt] = u
            nxt += 1
            unknown -= 1
            continue
        out = []
        for u in sorted((left, right)):
            lab2 = lab[:]
            inv2 = inv[:]
            lab2[u] = nxt
            inv2[nxt] = u
            out.extend(_label_cycle(cyc, lab2, inv2, nxt + 1))
        return out
    return [(lab, inv, nxt)]


def _label_link(link: Sequence[Facet], lab: list[int], inv: list[int], nxt: int):
    """Label every vertex of ``link``; returns one ``(lab, inv, nxt)`` per tie branch."""
    if type(link) is CycleLink:
        return _label_cycle(link, lab, inv, nxt)
    while True:
        best = None
        cands: list[int] = []
        for s in link:
            known = []
            unknown = []
            for x in s:
                y = lab[x]
                if y:
                    known.append(y)
                else:
                    unknown.append(x)
            if not unknown:
                continue
            known.sort()
            key = tuple(known) + (_INF,) * len(unknown)
            if best is None or key < best:
                best = key
                cands = unknown
            elif key == best:
                cands = cands + [u for u in unknown if u not in cands]
        if best is None:
            return [(lab, inv, nxt)]
        if len(cands) == 1:
            u = cands[0]
            lab[u] = nxt
            inv[nxt] = u
            nxt += 1
            continue
        out = []
        for u in cands:
            lab2 = lab[:]
            inv2 = inv[:]
            lab2[u] = nxt
            inv2[nxt] = u
            out.extend(_label_link(link, lab2, inv2, nxt + 1))
        return out


def _vertex_facets(link: Sequence[Facet], lab: list[int], c: int) -> list[int]:
    if type(link) is CycleLink:
        out = []
        base = c << 16
        prev = lab[link[-1]]
        for x in link:
            cur = lab[x]
            if cur > c and prev > c:
                out.append(base | (cur << 8 | prev if cur < prev else prev << 8 | cur))
            prev = cur
        out.sort()
        return out
    out = []
    for s in link:
        ys = sorted(lab[x] for x in s)
        if ys[0] > c:
            out.append(pack((c, *ys)))
    out.sort()
    return out


def _search(packed: Sequence[int], link_of: LinkFn, is_closed: ClosedFn,
            lab: list[int], inv: list[int], nxt: int, c: int, pos: int) -> int:
    """Compare a partial relabeling against ``packed`` from vertex ``c`` on.

    Returns -1 as soon as some extension is provably lex-smaller, +1 when
    every extension is provably larger, and 0 when undecided or equal.
    """
    while c < nxt:
        old = inv[c]
        if not is_closed(old):
            return 0
        link = link_of(old)
        states = _label_link(link, lab, inv, nxt)
        if len(states) > 1:
            verdict = 1
            for lab2, inv2, nxt2 in states:
                r = _compare_and_go(packed, link_of, is_closed, link, lab2, inv2, nxt2, c, pos)
                if r < 0:
                    return -1
                verdict = min(verdict, r)
            return verdict
        lab, inv, nxt = states[0]
        mine = _vertex_facets(link, lab, c)
        r = _compare_block(packed, mine, pos)
        if r is not None:
            return r
        pos += len(mine)
        c += 1
    return 0


def _compare_block(packed: Sequence[int], mine: list[int], pos: int) -> int | None:
    """Compare relabeled facets against ``packed[pos:]``; None if all equal."""
    end = len(packed)
    for i, code in enumerate(mine):
        if pos + i >= end:
            # later facets of a partial complex exceed its current last facet
            return -1 if end and code < packed[-1] else 0
        other = packed[pos + i]
        if code != other:
            return -1 if code < other else 1
    return None


def _compare_and_go(packed, link_of, is_closed, link, lab, inv, nxt, c, pos) -> int:
    mine = _vertex_facets(link, lab, c)
    r = _compare_block(packed, mine, pos)
    if r is not None:
        return r
    return _search(packed, link_of, is_closed, lab, inv, nxt, c + 1, pos + len(mine))


def _complete(link_of: LinkFn, lab: list[int], inv: list[int], nxt: int, c: int):
    """Every greedy completion of a seed on a closed connected complex."""
    while c < nxt:
        states = _label_link(link_of(inv[c]), lab, inv, nxt)
        if len(states) > 1:
            for lab2, inv2, nxt2 in states:
                yield from _complete(link_of, lab2, inv2, nxt2, c + 1)
            return
        lab, inv, nxt = states[0]
        c += 1
    yield lab


# -- seeds --------------------------------------------------------------------


def surface_seeds(v: int, link: Sequence[Facet]):
    """The ``2 * deg(v)`` flag seeds ``(v, w, x, y)`` of a closed surface vertex."""
    cyc = link if type(link) is CycleLink else cycle_order(link)
    if cyc is None:
        raise ValueError(f"link of {v} is not a circle")
    d = len(cyc)
    for i, w in enumerate(cyc):
        a, b = cyc[i - 1], cyc[(i + 1) % d]
        yield (v, w, a, b)
        yield (v, w, b, a)


def _seed_arrays(size: int, pairs: Iterable[tuple[int, int]]):
    lab = [0] * size
    inv = [0] * (size + 1)
    nxt = 1
    for old, new in pairs:
        lab[old] = new
        inv[new] = old
        nxt = max(nxt, new + 1)
    return lab, inv, nxt


def sphere_key_and_maps(link: Sequence[Facet]) -> tuple[tuple[int, ...], list[dict[int, int]]]:
    """Canonical form of a 2-sphere link (packed) and every labeling realising it."""
    form, maps = canonical_labelings(link)
    return tuple(pack(f) for f in form), maps


# -- public API ---------------------------------------------------------------


class _FacetIndex:
    """Link/closedness lookups for an arbitrary closed facet list."""

    def __init__(self, facets: Sequence[Facet]):
        self.star: dict[int, list[Facet]] = {}
        for f in facets:
            for x in f:
                self.star.setdefault(x, []).append(f)
        self._links: dict[int, list[Facet]] = {}

    def link(self, v: int) -> list[Facet]:
        lk = self._links.get(v)
        if lk is None:
            lk = sorted(tuple(x for x in f if x != v) for f in self.star[v])
            if len(lk[0]) == 2:
                cyc = cycle_order(lk)
                if cyc is None:
                    raise ValueError(f"link of {v} is not a circle")
                lk = CycleLink(cyc)
            self._links[v] = lk
        return lk


def canonical_labelings(facets: Iterable[Sequence[int]]) -> tuple[list[Facet], list[dict[int, int]]]:
    """Lex-smallest relabeled facet list of a closed connected manifold.

    Also returns every old-to-new labeling that attains it (one per
    automorphism).  Vertex labels of the input may be arbitrary positive
    integers.
    """
    fs = sorted(tuple(sorted(f)) for f in facets)
    if not fs:
        raise ValueError("empty complex")
    dim = len(fs[0]) - 1
    idx = _FacetIndex(fs)
    verts = sorted(idx.star)
    size = verts[-1] + 1

    seeds: list[list[tuple[int, int]]] = []
    if dim == 2:
        dmin = min(len(idx.star[v]) for v in verts)
        for v in verts:
            if len(idx.star[v]) == dmin:
                for s in surface_seeds(v, idx.link(v)):
                    seeds.append(list(zip(s, (1, 2, 3, 4))))
    elif dim == 3:
        keyed = {v: sphere_key_and_maps(idx.link(v)) for v in verts}
        kmin = min(k for k, _ in keyed.values())
        for v in verts:
            key, maps = keyed[v]
            if key == kmin:
                for m in maps:
                    seeds.append([(v, 1)] + [(x, y + 1) for x, y in m.items()])
    else:
        raise ValueError("only surfaces and 3-manifolds are supported")

    best: list[Facet] | None = None
    best_maps: list[dict[int, int]] = []
    for seed in seeds:
        lab, inv, nxt = _seed_arrays(size, seed)
        for full in _complete(idx.link, lab, inv, nxt, 1):
            image = sorted(tuple(sorted(full[x] for x in f)) for f in fs)
            mapping = {v: full[v] for v in verts}
            if best is None or image < best:
                best = image
                best_maps = [mapping]
            elif image == best and mapping not in best_maps:
                best_maps.append(mapping)
    assert best is not None
    return best, best_maps


def canonical_form(facets: Iterable[Sequence[int]], verify: bool = True) -> list[Facet]:
    """The lexicographically smallest relabeling of a closed combinatorial manifold."""
    fs = sorted(tuple(sorted(f)) for f in facets)
    if verify:
        _verify_relabelable(fs)
    return canonical_labelings(fs)[0]


def _verify_relabelable(fs: list[Facet]) -> None:
    # accept arbitrary labels by compressing them to 1..m first
    verts = sorted({x for f in fs for x in f})
    squeeze = {x: i + 1 for i, x in enumerate(verts)}
    verify_manifold(sorted(tuple(squeeze[x] for x in f) for f in fs))


def is_isomorphic(a: Iterable[Sequence[int]], b: Iterable[Sequence[int]]) -> bool:
    fa = sorted(tuple(sorted(f)) for f in a)
    fb = sorted(tuple(sorted(f)) for f in b)
    if len(fa) != len(fb) or (fa and len(fa[0]) != len(fb[0])):
        return False
    return canonical_form(fa) == canonical_form(fb)


def smaller_relabeling_exists(packed: Sequence[int], seeds: Iterable[Sequence[tuple[int, int]]],
                              link_of: LinkFn, is_closed: ClosedFn, size: int,
                              start_pos: int) -> bool:
    """True if some seed extends to a relabeling that is provably lex-smaller.

    ``start_pos`` is the number of facets of vertex 1's star; every seed
    reproduces that prefix by construction, so comparison starts at vertex 2.
    """
    for seed in seeds:
        lab, inv, nxt = _seed_arrays(size, seed)
        states = _label_link(link_of(inv[1]), lab, inv, nxt)
        for lab2, inv2, nxt2 in states:
            if _search(packed, link_of, is_closed, lab2, inv2, nxt2, 2, start_pos) < 0:
                return True
    return False


def partial_is_lex_minimal(K: PartialComplex) -> bool:
    """False iff some relabeling of ``K`` is provably lex-smaller on a determined prefix.

    ``K`` must contain a closed, normalized star of vertex 1.
    """
    if not K.is_closed_vertex(1):
        raise ValueError("vertex 1 must have a closed star")
    links = {v: link_of_vertex(K, v) for v in K.used_vertices() if K.is_closed_vertex(v)}
    if K.dim == 2:
        for v, lk in links.items():
            cyc = cycle_order(lk)
            if cyc is None:
                return False
            links[v] = CycleLink(cyc)
    seeds: list[list[tuple[int, int]]] = []
    if K.dim == 2:
        d1 = K.vertex_degree[1]
        for v, lk in links.items():
            dv = K.vertex_degree[v]
            if dv < d1:
                return False
            if dv == d1:
                seeds.extend(list(zip(s, (1, 2, 3, 4))) for s in surface_seeds(v, lk))
    else:
        keys = {v: sphere_key_and_maps(lk) for v, lk in links.items()}
        k1 = keys[1][0]
        for v, (key, maps) in keys.items():
            if key < k1:
                return False
            if key == k1:
                seeds.extend([(v, 1)] + [(x, y + 1) for x, y in m.items()] for m in maps)
    return not smaller_relabeling_exists(
        K.packed, seeds, links.__getitem__, K.is_closed_vertex, K.n_target + 1,
        K.vertex_degree[1])
