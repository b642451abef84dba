"""Facets, partial complexes and the structural predicates built on them.

A facet is a strictly increasing tuple of ``dim + 1`` positive vertex labels.
Internally facets are also packed into a single integer, eight bits per
label, so that lexicographic order on facets coincides with integer order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

Facet = tuple[int, ...]

MAX_LABEL = 255

UNUSED, OPEN, CLOSED = "unused", "open", "closed"


class FacetViolation(Exception):
    """Adding a facet would break the pseudomanifold conditions.

    ``kind`` is ``"ridge_overuse"`` or ``"closed_vertex"``; ``items`` holds the
    offending ridges or vertices.
    """

    def __init__(self, kind: str, items: Sequence):
        self.kind = kind
        self.items = tuple(items)
        super().__init__(f"{kind}: {self.items}")


def pack(facet: Sequence[int]) -> int:
    code = 0
    for x in facet:
        code = (code << 8) | x
    return code


def unpack(code: int, size: int) -> Facet:
    out = []
    for _ in range(size):
        out.append(code & 0xFF)
        code >>= 8
    return tuple(reversed(out))


def check_facet(facet: Sequence[int], dim: int, n_max: int = MAX_LABEL) -> Facet:
    f = tuple(int(x) for x in facet)
    if len(f) != dim + 1:
        raise ValueError(f"facet {f} must have {dim + 1} vertices")
    if any(a >= b for a, b in zip(f, f[1:])):
        raise ValueError(f"facet {f} is not strictly increasing")
    if f[0] < 1 or f[-1] > n_max:
        raise ValueError(f"facet {f} has labels outside 1..{n_max}")
    return f


def ridges_of(facet: Facet) -> list[Facet]:
    return list(combinations(facet, len(facet) - 1))


class PartialComplex:
    """Growing lex-ordered facet list with incidence bookkeeping.

    ``ridge_use`` is a dense table indexed by a rank of the ridge's labels;
    a vertex is closed once it is used and has no incident ridge of usage 1.
    Instances are owned by a single search; copy them before sharing.
    """

    def __init__(self, dim: int, n_target: int, facets: Iterable[Sequence[int]] = ()):
        if dim not in (2, 3):
            raise ValueError("dim must be 2 or 3")
        if not 1 <= n_target <= MAX_LABEL:
            raise ValueError(f"n_target must lie in 1..{MAX_LABEL}")
        self.dim = dim
        self.n_target = n_target
        size = n_target + 1
        self._size = size
        self.facets: list[Facet] = []
        self.packed: list[int] = []
        self.ridge_use: list[int] = [0] * size ** dim
        self.vertex_degree: list[int] = [0] * size
        self.open_ridges: list[int] = [0] * size
        self.star: list[list[Facet]] = [[] for _ in range(size)]
        self.used_vertex_count = 0
        self.max_label = 0
        self.open_ridge_total = 0
        for f in facets:
            self.add_facet(f)

    # -- indexing ---------------------------------------------------------

    def ridge_index(self, ridge: Sequence[int]) -> int:
        s = self._size
        idx = 0
        for x in ridge:
            idx = idx * s + x
        return idx

    def ridge_usage(self, ridge: Sequence[int]) -> int:
        return self.ridge_use[self.ridge_index(sorted(ridge))]

    def is_closed_vertex(self, v: int) -> bool:
        return self.vertex_degree[v] > 0 and self.open_ridges[v] == 0

    def vertex_state(self, v: int) -> str:
        if self.vertex_degree[v] == 0:
            return UNUSED
        return CLOSED if self.open_ridges[v] == 0 else OPEN

    def is_closed(self) -> bool:
        return bool(self.facets) and self.open_ridge_total == 0

    @property
    def last(self) -> Facet | None:
        return self.facets[-1] if self.facets else None

    # -- mutation ---------------------------------------------------------

    def add_facet(self, facet: Sequence[int]) -> list[int]:
        """Append ``facet`` and return the vertices whose stars just closed.

        Raises ``ValueError`` if the facet is malformed or not lex-greater
        than the current last facet, and ``FacetViolation`` if a ridge is
        already used twice or a closed vertex would be touched.
        """
        f = check_facet(facet, self.dim, self.n_target)
        if self.packed and pack(f) <= self.packed[-1]:
            raise ValueError(f"facet {f} is not lex-greater than {self.facets[-1]}")
        closed = [x for x in f if self.is_closed_vertex(x)]
        if closed:
            raise FacetViolation("closed_vertex", closed)
        full = [r for r in ridges_of(f) if self.ridge_usage(r) >= 2]
        if full:
            raise FacetViolation("ridge_overuse", full)
        return self.push(f)

    def push(self, f: Facet) -> list[int]:
        """Unchecked append used by the search; returns newly closed vertices."""
        self.facets.append(f)
        self.packed.append(pack(f))
        use = self.ridge_use
        open_r = self.open_ridges
        s = self._size
        for r in combinations(f, self.dim):
            idx = 0
            for x in r:
                idx = idx * s + x
            u = use[idx]
            use[idx] = u + 1
            if u == 0:
                self.open_ridge_total += 1
                for x in r:
                    open_r[x] += 1
            else:
                self.open_ridge_total -= 1
                for x in r:
                    open_r[x] -= 1
        deg = self.vertex_degree
        newly = []
        for x in f:
            if deg[x] == 0:
                self.used_vertex_count += 1
                if x > self.max_label:
                    self.max_label = x
            deg[x] += 1
            self.star[x].append(f)
            if open_r[x] == 0:
                newly.append(x)
        return newly

    def remove_last_facet(self) -> Facet:
        if not self.facets:
            raise IndexError("remove_last_facet on an empty complex")
        return self.pop()

    def pop(self) -> Facet:
        f = self.facets.pop()
        self.packed.pop()
        use = self.ridge_use
        open_r = self.open_ridges
        s = self._size
        for r in combinations(f, self.dim):
            idx = 0
            for x in r:
                idx = idx * s + x
            u = use[idx]
            use[idx] = u - 1
            if u == 1:
                self.open_ridge_total -= 1
                for x in r:
                    open_r[x] -= 1
            else:
                self.open_ridge_total += 1
                for x in r:
                    open_r[x] += 1
        deg = self.vertex_degree
        for x in f:
            deg[x] -= 1
            self.star[x].pop()
            if deg[x] == 0:
                self.used_vertex_count -= 1
        while self.max_label and deg[self.max_label] == 0:
            self.max_label -= 1
        return f

    def copy(self) -> "PartialComplex":
        return PartialComplex(self.dim, self.n_target, self.facets)

    # -- derived views ----------------------------------------------------

    def used_vertices(self) -> list[int]:
        return [v for v in range(1, self._size) if self.vertex_degree[v]]

    def open_vertices(self) -> list[int]:
        return [v for v in range(1, self._size) if self.vertex_state(v) == OPEN]

    def recount(self) -> tuple[list[int], list[int], list[int]]:
        """Ridge usage, degrees and open-ridge counts recomputed from scratch."""
        fresh = PartialComplex(self.dim, self.n_target)
        for f in self.facets:
            fresh.push(f)
        return fresh.ridge_use, fresh.vertex_degree, fresh.open_ridges

    def check_consistency(self) -> None:
        use, deg, open_r = self.recount()
        assert use == self.ridge_use, "ridge usage drifted from facet list"
        assert deg == self.vertex_degree, "vertex degrees drifted from facet list"
        assert open_r == self.open_ridges, "open ridge counts drifted from facet list"
        assert all(u <= 2 for u in use)
        assert all(a < b for a, b in zip(self.packed, self.packed[1:]))

    def link(self, v: int) -> list[Facet]:
        return link_of_vertex(self, v)

    def __len__(self) -> int:
        return len(self.facets)

    def __repr__(self) -> str:
        return f"PartialComplex(dim={self.dim}, n_target={self.n_target}, facets={self.facets})"


@dataclass(frozen=True)
class Triangulation:
    """A closed combinatorial manifold on the labels ``1..n``."""

    dim: int
    n: int
    facets: tuple[Facet, ...]
    f_vector: tuple[int, ...] = field(default=())

    @classmethod
    def from_facets(cls, facets: Iterable[Sequence[int]], verify: bool = True) -> "Triangulation":
        fs = sorted(tuple(sorted(f)) for f in facets)
        if not fs:
            raise ValueError("empty facet list")
        dim = len(fs[0]) - 1
        n = max(f[-1] for f in fs)
        if verify:
            verify_manifold(fs, dim)
        return cls(dim, n, tuple(fs), f_vector(fs))

    def __len__(self) -> int:
        return len(self.facets)


def f_vector(facets: Sequence[Facet]) -> tuple[int, ...]:
    dim = len(facets[0]) - 1
    faces = [set() for _ in range(dim + 1)]
    for f in facets:
        for k in range(1, dim + 2):
            faces[k - 1].update(combinations(f, k))
    return tuple(len(s) for s in faces)


def link_of_vertex(K, v: int) -> list[Facet]:
    """Link of ``v``: the facets through ``v`` with ``v`` removed.

    For surfaces this is the edge list of the link graph, for 3-manifolds
    the triangle list of the link surface. ``K`` is a ``PartialComplex`` or a
    plain facet sequence.
    """
    if isinstance(K, PartialComplex):
        star = K.star[v]
    else:
        star = [f for f in K if v in f]
    return sorted(tuple(x for x in f if x != v) for f in star)


def cycle_order(edges: Sequence[Sequence[int]]) -> list[int] | None:
    """Vertices of ``edges`` in cyclic order if they form one simple cycle."""
    if len(edges) < 3:
        return None
    adj: dict[int, list[int]] = {}
    for a, b in edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    if len(adj) != len(edges) or any(len(nb) != 2 for nb in adj.values()):
        return None
    start = edges[0][0]
    order = [start]
    prev, cur = start, adj[start][0]
    while cur != start:
        order.append(cur)
        a, b = adj[cur]
        prev, cur = cur, (b if a == prev else a)
    return order if len(order) == len(adj) else None


def is_two_sphere(triangles: Sequence[Sequence[int]]) -> bool:
    """True iff ``triangles`` form a connected closed surface with Euler characteristic 2."""
    if len(triangles) < 4:
        return False
    edge_star: dict[tuple[int, int], int] = {}
    vertex_link: dict[int, list[tuple[int, int]]] = {}
    for t in triangles:
        a, b, c = sorted(t)
        for e in ((a, b), (a, c), (b, c)):
            edge_star[e] = edge_star.get(e, 0) + 1
        vertex_link.setdefault(a, []).append((b, c))
        vertex_link.setdefault(b, []).append((a, c))
        vertex_link.setdefault(c, []).append((a, b))
    if any(k != 2 for k in edge_star.values()):
        return False
    if any(cycle_order(lk) is None for lk in vertex_link.values()):
        return False
    if len(vertex_link) - len(edge_star) + len(triangles) != 2:
        return False
    return is_strongly_connected(triangles)


def link_is_sphere(link: Sequence[Sequence[int]]) -> bool:
    """Circle test for an edge list, 2-sphere test for a triangle list."""
    if not link:
        return False
    if len(link[0]) == 2:
        return cycle_order(link) is not None
    if len(link[0]) == 3:
        return is_two_sphere(link)
    raise ValueError("links must consist of edges or triangles")


def is_strongly_connected(K) -> bool:
    """True iff the dual graph (facets adjacent across a shared ridge) is connected."""
    facets = K.facets if isinstance(K, PartialComplex) else [tuple(f) for f in K]
    if not facets:
        return True
    parent = list(range(len(facets)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    seen: dict[Facet, int] = {}
    for i, f in enumerate(facets):
        for r in combinations(sorted(f), len(f) - 1):
            j = seen.setdefault(r, i)
            if j != i:
                parent[find(i)] = find(j)
    root = find(0)
    return all(find(i) == root for i in range(len(facets)))


def is_connected(facets: Sequence[Sequence[int]]) -> bool:
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for f in facets:
        for x in f[1:]:
            parent[find(x)] = find(f[0])
    return len({find(x) for x in parent}) <= 1


def verify_manifold(facets: Sequence[Facet], dim: int | None = None) -> None:
    """Raise ``ValueError`` unless ``facets`` is a closed connected combinatorial manifold."""
    if not facets:
        raise ValueError("empty complex")
    dim = len(facets[0]) - 1 if dim is None else dim
    if len(set(facets)) != len(facets):
        raise ValueError("duplicate facet")
    use: dict[Facet, int] = {}
    for f in facets:
        if len(f) != dim + 1:
            raise ValueError(f"facet {f} has wrong size")
        for r in combinations(f, dim):
            use[r] = use.get(r, 0) + 1
    bad = [r for r, k in use.items() if k != 2]
    if bad:
        raise ValueError(f"complex is not closed: ridge {bad[0]} lies in {use[bad[0]]} facets")
    labels = sorted({x for f in facets for x in f})
    if labels != list(range(1, len(labels) + 1)):
        raise ValueError("labels must be exactly 1..n")
    if not is_connected(facets):
        raise ValueError("complex is disconnected")
    for v in labels:
        if not link_is_sphere(link_of_vertex(facets, v)):
            raise ValueError(f"link of vertex {v} is not a sphere")
