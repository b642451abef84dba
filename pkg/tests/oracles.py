"""Slow, independent reference implementations used to cross-check the engine."""
from __future__ import annotations

from itertools import combinations, permutations

import networkx as nx


def _is_circle(edges):
    g = nx.Graph(edges)
    return g.number_of_edges() == g.number_of_nodes() and nx.is_connected(g) and all(
        d == 2 for _, d in g.degree())


def _is_2sphere(triangles):
    verts = {x for t in triangles for x in t}
    edges = {e for t in triangles for e in combinations(t, 2)}
    g = nx.Graph()
    g.add_edges_from(edges)
    if not nx.is_connected(g):
        return False
    # every edge in exactly two triangles and every vertex link a circle
    for e in edges:
        if sum(1 for t in triangles if set(e) <= set(t)) != 2:
            return False
    for v in verts:
        link = [tuple(x for x in t if x != v) for t in triangles if v in t]
        if not _is_circle(link):
            return False
    return len(verts) - len(edges) + len(triangles) == 2


def link_ok(facets, v):
    link = [tuple(x for x in f if x != v) for f in facets if v in f]
    if len(link[0]) == 2:
        return _is_circle(link)
    return _is_2sphere(link)


def naive_manifolds(dim: int, n: int):
    """Every closed combinatorial manifold on exactly the labels 1..n, up to the
    harmless choice of unused labels.

    Starts from the facet 1..dim+1 and always completes the smallest ridge
    used only once; a vertex not yet used always gets the smallest unused label.
    Each isomorphism class appears at least once (usually many times).
    """
    first = tuple(range(1, dim + 2))
    facets = [first]
    present = {first}
    use = {}
    for r in combinations(first, dim):
        use[r] = 1
    out = []

    def closed_vertices():
        return [v for v in range(1, n + 1)
                if any(v in f for f in facets)
                and all(use.get(r, 0) != 1 for r in use if v in r)]

    def rec(used):
        open_ridges = [r for r, u in use.items() if u == 1]
        if not open_ridges:
            if used == n:
                out.append(sorted(facets))
            return
        r = min(open_ridges)
        closed = set(closed_vertices())
        for x in range(1, min(n, used + 1) + 1):
            if x in r or x in closed:
                continue
            f = tuple(sorted(r + (x,)))
            if f in present:
                continue
            ridges = list(combinations(f, dim))
            if any(use.get(q, 0) >= 2 for q in ridges):
                continue
            facets.append(f)
            present.add(f)
            for q in ridges:
                use[q] = use.get(q, 0) + 1
            # a vertex whose star just closed must have a sphere link
            now_closed = [v for v in f if v not in closed and all(
                use.get(q, 0) != 1 for q in use if v in q)]
            if all(link_ok(facets, v) for v in now_closed):
                rec(max(used, x))
            for q in ridges:
                use[q] -= 1
                if use[q] == 0:
                    del use[q]
            facets.pop()
            present.discard(f)

    rec(dim + 1)
    return out


def brute_canonical(facets):
    """Lex-smallest relabeling by trying every permutation (tiny inputs only)."""
    verts = sorted({x for f in facets for x in f})
    best = None
    for perm in permutations(range(1, len(verts) + 1)):
        m = dict(zip(verts, perm))
        img = sorted(tuple(sorted(m[x] for x in f)) for f in facets)
        if best is None or img < best:
            best = img
    return best


def incidence_graph(facets):
    g = nx.Graph()
    for f in facets:
        g.add_node(("f", f), kind="f")
        for x in f:
            g.add_node(("v", x), kind="v")
            g.add_edge(("f", f), ("v", x))
    return g


def isomorphism_classes(complexes):
    """Group facet lists into combinatorial isomorphism classes with networkx."""
    buckets = {}
    match = nx.algorithms.isomorphism.categorical_node_match("kind", None)
    for fs in complexes:
        g = incidence_graph(fs)
        key = nx.weisfeiler_lehman_graph_hash(g, node_attr="kind")
        reps = buckets.setdefault(key, [])
        for rep, rg in reps:
            if nx.is_isomorphic(g, rg, node_match=match):
                break
        else:
            reps.append((fs, g))
    return [fs for reps in buckets.values() for fs, _ in reps]
