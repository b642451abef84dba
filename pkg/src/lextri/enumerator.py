"""Isomorphism-free lexicographic enumeration of surfaces and 3-manifolds.

Facets are appended in lex order; the next facet always contains ``k``, the
smallest vertex whose star is still open.  A new facet may introduce at most
one new vertex on surfaces and two on 3-manifolds, always the next unused
labels.  After every addition the branch is pruned, cheapest test first, if
a closed vertex beats vertex 1 (smaller degree, or a lex-smaller link sphere
in dimension 3), if a just-closed vertex link is not a sphere, or if some
relabeling of the partial complex is provably lex-smaller.
"""
from __future__ import annotations

import os
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Callable, Iterator

from .canonical import CycleLink, _label_link, _search, _seed_arrays, sphere_key_and_maps, surface_seeds
from .complex import Facet, PartialComplex, Triangulation, cycle_order, is_strongly_connected, is_two_sphere

# backtrack reasons
RIDGE_OVERUSE = "ridge_overuse"
CLOSED_VERTEX_TOUCHED = "closed_vertex_touched"
DEGREE_TOO_SMALL = "degree_too_small"
RELABELING_SMALLER = "relabeling_smaller"
LINK_NOT_SPHERE = "link_not_sphere"
WRONG_VERTEX_COUNT = "wrong_vertex_count"
DEGREE_CONSTRAINT_VIOLATED = "degree_constraint_violated"
EXHAUSTED = "exhausted"

# event kinds
FACET_ADDED = "facet_added"
BACKTRACK = "backtrack"
SURFACE_COMPLETE = "surface_complete"
MANIFOLD_EMITTED = "manifold_emitted"
MANIFOLD_DISCARDED = "manifold_discarded"

DEFAULT_SPLIT_DEPTH = 2
PROGRESS_EVERY = 1_000_000


def debug_asserts_enabled() -> bool:
    return os.environ.get("LEXTRI_DEBUG_ASSERTS", "") not in ("", "0")


@dataclass(frozen=True)
class EnumerationConfig:
    dim: int
    n: int
    degree_constraint: int | None = None
    partition: tuple[int, int] | None = None
    trace: bool = False
    split_depth: int = DEFAULT_SPLIT_DEPTH
    relabel_every: int = 1
    relabel_prune: bool = True
    max_facets: int | None = None

    def __post_init__(self):
        if self.dim not in (2, 3):
            raise ValueError("dim must be 2 or 3")
        if self.n < self.dim + 2:
            raise ValueError(f"dim {self.dim} needs n >= {self.dim + 2}")
        if self.n > 255:
            raise ValueError("n must be at most 255")
        if self.degree_constraint is not None:
            if self.dim != 2:
                raise ValueError("a degree constraint is only supported for surfaces")
            if self.degree_constraint < 3:
                raise ValueError("degree constraint must be at least 3")
        if self.partition is not None:
            i, m = self.partition
            if m < 1 or not 0 <= i < m:
                raise ValueError("partition must satisfy 0 <= i < m")
        if self.relabel_every < 1:
            raise ValueError("relabel_every must be positive")
        if self.split_depth < 1:
            raise ValueError("split_depth must be positive")


@dataclass(frozen=True)
class EnumerationEvent:
    kind: str
    snapshot: tuple[Facet, ...]
    open_vertices: tuple[int, ...]
    reason: str | None = None
    vertex: int | None = None


def surface_star(d: int) -> list[Facet]:
    """Normalized closed star of vertex 1 with degree ``d``: 123, 124, 135, ..., 1d(d+1)."""
    star = [(1, 2, 3), (1, 2, 4)]
    star += [(1, i, i + 2) for i in range(3, d)]
    if d > 3:
        star.append((1, d, d + 1))
    else:
        star = [(1, 2, 3), (1, 2, 4), (1, 3, 4)]
    return star


@lru_cache(maxsize=None)
def canonical_spheres(d: int) -> tuple[tuple[Facet, ...], ...]:
    """All canonical 2-spheres with exactly ``d`` vertices, in lex order."""
    if d < 4:
        return ()
    cfg = EnumerationConfig(dim=2, n=d, max_facets=2 * d - 4)
    return tuple(t.facets for t in enumerate_triangulations(cfg) if len(t.facets) == 2 * d - 4)


def initial_stars(cfg: EnumerationConfig) -> list[list[Facet]]:
    """Closed stars of vertex 1 in lex-minimal labeling, one per admissible link."""
    if cfg.dim == 2:
        if cfg.degree_constraint is not None:
            q = cfg.degree_constraint
            return [surface_star(q)] if q <= cfg.n - 1 else []
        return [surface_star(d) for d in range(3, cfg.n)]
    stars = []
    for d in range(4, cfg.n):
        for sphere in canonical_spheres(d):
            stars.append([(1, a + 1, b + 1, c + 1) for a, b, c in sphere])
    stars.sort()
    return stars


class _Search:
    """Depth-first search state for one configuration (or one slice of it)."""

    def __init__(self, cfg: EnumerationConfig, progress: Callable[[int], None] | None = None):
        self.cfg = cfg
        self.n = cfg.n
        self.dim = cfg.dim
        self.q = cfg.degree_constraint
        self.K = PartialComplex(cfg.dim, cfg.n)
        self.size = cfg.n + 1
        self.links: dict[int, list[Facet]] = {}
        self.seeds: dict[int, list] = {}
        self.live: list = []
        self.partner = [0] * (self.size * self.size)
        self.path_log: list[tuple[int, int]] = []
        self.keys: dict[int, tuple[int, ...]] = {}
        self.deg1 = 0
        self.key1: tuple[int, ...] = ()
        self.star_len = 0
        self.nodes = 0
        self.additions = 0
        self.prunes: Counter[str] = Counter()
        self.ordinal = 0
        self.debug = debug_asserts_enabled()
        self.events: list[EnumerationEvent] | None = [] if cfg.trace else None
        self.progress = progress
        if cfg.partition is None:
            self.slice, self.modulus = 0, 1
        else:
            self.slice, self.modulus = cfg.partition
        self.max_facets = cfg.max_facets
        if self.q is not None:
            f2 = cfg.n * self.q
            self.max_facets = f2 // 3 if f2 % 3 == 0 else 0

    # -- events -----------------------------------------------------------

    def _event(self, kind: str, reason: str | None = None, vertex: int | None = None) -> None:
        K = self.K
        opened = tuple(v for v in range(1, self.n + 1) if not K.is_closed_vertex(v))
        self.events.append(EnumerationEvent(kind, tuple(K.facets), opened, reason, vertex))

    # -- closure bookkeeping ------------------------------------------------

    def _close(self, v: int) -> str | None:
        """Register a vertex whose star just closed; returns a prune reason or None."""
        K = self.K
        link = [tuple(x for x in f if x != v) for f in K.star[v]]
        link.sort()
        if self.dim == 2:
            d = len(link)
            if d < self.deg1:
                return DEGREE_TOO_SMALL
            if self.q is not None and d != self.q:
                return DEGREE_CONSTRAINT_VIOLATED
            cyc = cycle_order(link)
            if cyc is None:
                return LINK_NOT_SPHERE
            cyc = CycleLink(cyc)
            self.links[v] = cyc
            if d == self.deg1:
                self.seeds[v] = [tuple(zip(s, (1, 2, 3, 4))) for s in surface_seeds(v, cyc)]
            return None
        if not is_two_sphere(link):
            return LINK_NOT_SPHERE
        key, maps = sphere_key_and_maps(link)
        if self.key1 and key < self.key1:
            return DEGREE_TOO_SMALL
        self.links[v] = link
        self.keys[v] = key
        if not self.key1 or key == self.key1:
            self.seeds[v] = [((v, 1),) + tuple((x, y + 1) for x, y in m.items()) for m in maps]
        return None

    def _forget(self, v: int) -> None:
        self.links.pop(v, None)
        self.seeds.pop(v, None)
        self.keys.pop(v, None)

    def _seed_verdict(self, seed) -> int:
        """-1 if the seed yields a smaller relabeling, +1 if it never can, else 0."""
        links = self.links
        lab, inv, nxt = _seed_arrays(self.size, seed)
        verdict = 1
        for lab2, inv2, nxt2 in _label_link(links[inv[1]], lab, inv, nxt):
            r = _search(self.K.packed, links.__getitem__, links.__contains__,
                        lab2, inv2, nxt2, 2, self.star_len)
            if r < 0:
                return -1
            if r == 0:
                verdict = 0
        return verdict

    def _relabel_smaller(self, pending: list) -> bool:
        # a seed shown to be larger stays larger in the whole subtree: the
        # facet prefix and the closed stars it was compared on never change
        live = []
        for seed in pending:
            r = self._seed_verdict(seed)
            if r < 0:
                return True
            if r == 0:
                live.append(seed)
        self.live = live
        return False

    # -- candidate facets ---------------------------------------------------

    def candidates(self, k: int) -> Iterator[Facet]:
        if self.dim == 2:
            return self._candidates2(k)
        return self._candidates3(k)

    def _candidates2(self, k: int) -> Iterator[Facet]:
        K = self.K
        use = K.ridge_use
        deg = K.vertex_degree
        open_r = K.open_ridges
        s = self.size
        n = self.n
        u = K.max_label
        q = self.q
        base = k * s
        r1 = k + 1
        while use[base + r1] != 1:
            r1 += 1
        last = K.facets[-1]
        lo_l, lo_m = (last[1], last[2]) if last[0] == k else (0, 0)
        top = min(n, u + 1)
        if q is not None and deg[k] >= q:
            return
        for l in range(max(k + 1, lo_l), r1 + 1):
            ukl = use[base + l]
            if ukl == 2 or open_r[l] == 0:
                continue
            if q is not None and deg[l] >= q:
                continue
            lbase = l * s
            m0 = lo_m + 1 if l == lo_l else l + 1
            for m in range(m0, top + 1):
                if m <= u and open_r[m] == 0:
                    continue
                if use[base + m] == 2 or use[lbase + m] == 2:
                    continue
                if q is not None and deg[m] >= q:
                    continue
                if ukl == 0:
                    # the new edge kl can only be closed later by some k l x with x > m
                    u2 = m if m > u else u
                    for x in range(m + 1, min(n, u2 + 1) + 1):
                        if (x > u2 or open_r[x]) and use[base + x] < 2 and use[lbase + x] < 2:
                            break
                    else:
                        continue
                yield (k, l, m)

    def _candidates3(self, k: int) -> Iterator[Facet]:
        K = self.K
        use = K.ridge_use
        open_r = K.open_ridges
        s = self.size
        n = self.n
        u = K.max_label
        kb = k * s
        x1 = y1 = 0
        for x in range(k + 1, u + 1):
            row = (kb + x) * s
            for y in range(x + 1, u + 1):
                if use[row + y] == 1:
                    x1, y1 = x, y
                    break
            if x1:
                break
        last = K.facets[-1]
        tail = (last[1], last[2], last[3]) if last[0] == k else (0, 0, 0)
        for a in range(k + 1, x1 + 1):
            if open_r[a] == 0 or a < tail[0]:
                continue
            ka = (kb + a) * s
            b_top = y1 if a == x1 else min(n, u + 1)
            for b in range(a + 1, b_top + 1):
                if b <= u and open_r[b] == 0:
                    continue
                if (a, b) < tail[:2]:
                    continue
                ukab = use[ka + b]
                if ukab == 2:
                    continue
                if b > u:
                    c_range = range(u + 2, u + 3) if u + 2 <= n else range(0)
                else:
                    c_range = range(b + 1, min(n, u + 1) + 1)
                kbb = (kb + b) * s
                ab = (a * s + b) * s
                for c in c_range:
                    if c <= u and open_r[c] == 0:
                        continue
                    if (a, b, c) <= tail:
                        continue
                    ukac = use[ka + c]
                    if ukac == 2 or use[kbb + c] == 2 or use[ab + c] == 2:
                        continue
                    u2 = max(u, c)
                    z_top = min(n, u2 + 1)
                    if ukab == 0:
                        # ridge kab needs a later facet k a b z with z > c
                        if not any(z > u2 or open_r[z] for z in range(c + 1, z_top + 1)):
                            continue
                    if ukac == 0:
                        if not any((z > u2 or open_r[z]) for z in range(b + 1, z_top + 1) if z != c):
                            continue
                    yield (k, a, b, c)

    # -- the search ---------------------------------------------------------

    def run(self) -> Iterator[Triangulation]:
        for star in initial_stars(self.cfg):
            yield from self._run_star(star)

    def _run_star(self, star: list[Facet]) -> Iterator[Triangulation]:
        K = self.K
        for f in star:
            K.push(f)
            if self.dim == 2:
                self._track_paths(f)
        self.star_len = len(star)
        self.links.clear()
        self.seeds.clear()
        self.keys.clear()
        self.deg1 = K.vertex_degree[1]
        self.key1 = ()
        reason = self._close(1)
        assert reason is None, "initial star must be a closed sphere star"
        if self.dim == 3:
            self.key1 = self.keys[1]
        self.live = list(self.seeds[1])
        if self.events is not None:
            self._event(FACET_ADDED)
        yield from self._grow(2, 0)
        if self.events is not None:
            self._event(BACKTRACK, EXHAUSTED)
        for _ in star:
            K.pop()
        self._untrack_paths(0)
        self.links.clear()
        self.seeds.clear()
        self.keys.clear()

    def _grow(self, k: int, depth: int) -> Iterator[Triangulation]:
        K = self.K
        open_r = K.open_ridges
        deg = K.vertex_degree
        while deg[k] and open_r[k] == 0:
            k += 1
        if self.max_facets is not None and len(K.facets) >= self.max_facets:
            return
        events = self.events
        first = True
        for f in self.candidates(k):
            if events is not None and not first:
                self._event(BACKTRACK, EXHAUSTED)
            first = False
            saved = self.live
            mark = len(self.path_log)
            newly = K.push(f)
            broken = self._track_paths(f) if self.dim == 2 else 0
            self.nodes += 1
            if self.progress is not None and self.nodes % PROGRESS_EVERY == 0:
                self.progress(self.nodes)
            reason, vertex = self._check(f, newly, k, broken)
            if reason is not None:
                self.prunes[reason] += 1
                if events is not None:
                    self._event(BACKTRACK, reason, vertex)
            elif K.open_ridge_total == 0:
                if self._mine(depth + 1, True):
                    if events is not None:
                        self._event(SURFACE_COMPLETE)
                    if K.used_vertex_count == self.n:
                        if events is not None:
                            self._event(MANIFOLD_EMITTED)
                        yield self._emit()
                    else:
                        self.prunes[WRONG_VERTEX_COUNT] += 1
                        if events is not None:
                            self._event(MANIFOLD_DISCARDED, WRONG_VERTEX_COUNT)
            else:
                if events is not None:
                    self._event(FACET_ADDED)
                if self._mine(depth + 1, False):
                    yield from self._grow(k, depth + 1)
            K.pop()
            self.live = saved
            if self.dim == 2:
                self._untrack_paths(mark)
            for v in newly:
                self._forget(v)

    def _mine(self, depth: int, complete: bool) -> bool:
        """Slice filter: whole subtrees rooted at the split depth go to one slice."""
        if self.modulus == 1:
            return True
        d = self.cfg.split_depth
        if depth > d or (depth < d and not complete):
            return True
        ordinal = self.ordinal
        self.ordinal += 1
        return ordinal % self.modulus == self.slice

    def _track_paths(self, f: Facet) -> int:
        """Update the path endpoints of the three touched vertex links.

        Each open surface vertex link is a disjoint union of paths; ``partner``
        maps a path end to its other end.  Returns a vertex whose link just
        closed a cycle while other link edges remain open (it can never become
        a single circle), or 0.
        """
        use = self.K.ridge_use
        open_r = self.K.open_ridges
        partner = self.partner
        log = self.path_log
        s = self.size
        a, b, c = f
        bad = 0
        for x, y, z in ((a, b, c), (b, a, c), (c, a, b)):
            base = x * s
            uy = use[x * s + y] if x < y else use[y * s + x]
            uz = use[x * s + z] if x < z else use[z * s + x]
            if uy == 1 and uz == 1:
                log.append((base + y, partner[base + y]))
                log.append((base + z, partner[base + z]))
                partner[base + y] = z
                partner[base + z] = y
            elif uy == 1 or uz == 1:
                new, old = (y, z) if uy == 1 else (z, y)
                p = partner[base + old]
                log.append((base + p, partner[base + p]))
                log.append((base + new, partner[base + new]))
                partner[base + p] = new
                partner[base + new] = p
            elif partner[base + y] == z:
                if open_r[x] and not bad:
                    bad = x
            else:
                py = partner[base + y]
                pz = partner[base + z]
                log.append((base + py, partner[base + py]))
                log.append((base + pz, partner[base + pz]))
                partner[base + py] = pz
                partner[base + pz] = py
        return bad

    def _untrack_paths(self, mark: int) -> None:
        log = self.path_log
        partner = self.partner
        while len(log) > mark:
            i, old = log.pop()
            partner[i] = old

    def _check(self, f: Facet, newly: list[int], k: int, broken: int = 0) -> tuple[str | None, int | None]:
        K = self.K
        q = self.q
        if q is not None:
            deg = K.vertex_degree
            for x in f:
                if deg[x] >= q and K.open_ridges[x]:
                    return DEGREE_CONSTRAINT_VIOLATED, x
        registered = []
        for v in newly:
            reason = self._close(v)
            if reason is not None:
                for w in registered:
                    self._forget(w)
                self._forget(v)
                return reason, v
            registered.append(v)
        if broken:
            return LINK_NOT_SPHERE, broken
        if not newly:
            if self.debug:
                K.check_consistency()
            return None, None
        if self.debug:
            K.check_consistency()
            if k in newly:
                assert is_strongly_connected(K), "partial complex not strongly connected at star closure"
        self.additions += 1
        pending = self.live + [seed for v in newly for seed in self.seeds.get(v, ())]
        must_check = K.open_ridge_total == 0
        if (self.cfg.relabel_prune and self.additions % self.cfg.relabel_every == 0) or must_check:
            if self._relabel_smaller(pending):
                return RELABELING_SMALLER, None
        else:
            self.live = pending
        return None, None

    def _emit(self) -> Triangulation:
        fs = tuple(self.K.facets)
        n = self.n
        if self.dim == 2:
            fv = (n, 3 * len(fs) // 2, len(fs))
        else:
            edges = {e for f in fs for e in combinations(f, 2)}
            fv = (n, len(edges), 2 * len(fs), len(fs))
        return Triangulation(self.dim, n, fs, fv)


def next_candidate_facets(K: PartialComplex) -> list[Facet]:
    """Lex-ordered legal next facets through the smallest open vertex of ``K``."""
    opened = [v for v in K.used_vertices() if not K.is_closed_vertex(v)]
    if not opened:
        raise ValueError("complex has no open vertex")
    cfg = EnumerationConfig(dim=K.dim, n=K.n_target)
    search = _Search(cfg)
    search.K = K
    return list(search.candidates(opened[0]))


def enumerate_triangulations(cfg: EnumerationConfig,
                             progress: Callable[[int], None] | None = None) -> Iterator[Triangulation]:
    """Every canonical triangulation on exactly ``cfg.n`` vertices, in lex order.

    Honors ``cfg.partition`` (a slice of the search tree) and
    ``cfg.degree_constraint`` (all vertex degrees equal).
    """
    return _Search(cfg, progress).run()


def enumerate_partition(cfg: EnumerationConfig, index: int, modulus: int) -> Iterator[Triangulation]:
    """One deterministic slice of the search; the slices partition the full output."""
    sliced = EnumerationConfig(
        dim=cfg.dim, n=cfg.n, degree_constraint=cfg.degree_constraint,
        partition=(index, modulus), split_depth=cfg.split_depth,
        relabel_every=cfg.relabel_every, relabel_prune=cfg.relabel_prune,
        max_facets=cfg.max_facets)
    return enumerate_triangulations(sliced)


class Enumeration:
    """Runs a configuration while keeping node and prune statistics."""

    def __init__(self, cfg: EnumerationConfig, progress: Callable[[int], None] | None = None):
        self._search = _Search(cfg, progress)
        self.cfg = cfg

    def __iter__(self) -> Iterator[Triangulation]:
        return self._search.run()

    @property
    def nodes(self) -> int:
        return self._search.nodes

    @property
    def prunes(self) -> Counter:
        return self._search.prunes


def trace(cfg: EnumerationConfig) -> list[EnumerationEvent]:
    """Event log of a (small) run: additions, backtracks and completions."""
    if not cfg.trace:
        cfg = EnumerationConfig(dim=cfg.dim, n=cfg.n, degree_constraint=cfg.degree_constraint,
                                trace=True, relabel_prune=cfg.relabel_prune)
    search = _Search(cfg)
    for _ in search.run():
        pass
    return search.events


def _label_text(facet: Facet, wide: bool) -> str:
    return ".".join(map(str, facet)) if wide else "".join(map(str, facet))


def _reason_text(ev: EnumerationEvent) -> str:
    if ev.reason == DEGREE_TOO_SMALL:
        return f"degree of {ev.vertex} too small"
    if ev.reason == RELABELING_SMALLER:
        return "relabeling is smaller"
    if ev.reason == LINK_NOT_SPHERE:
        return f"link of {ev.vertex} is not a sphere"
    if ev.reason == DEGREE_CONSTRAINT_VIOLATED:
        return f"degree of {ev.vertex} violates the constraint"
    return ""


def render_trace(events: list[EnumerationEvent]) -> list[str]:
    """One row per step: ``faces | incomplete vertices | reason``."""
    rows = []
    i = 0
    while i < len(events):
        ev = events[i]
        wide = any(x > 9 for f in ev.snapshot for x in f)
        faces = "+".join(_label_text(f, wide) for f in ev.snapshot)
        if ev.kind == SURFACE_COMPLETE:
            nxt = events[i + 1]
            reason = "surface complete!" if nxt.kind == MANIFOLD_EMITTED else "surface complete"
            i += 1
        elif ev.kind == BACKTRACK and ev.reason != EXHAUSTED:
            reason = _reason_text(ev)
        else:
            reason = ""
        opened = " ".join(map(str, ev.open_vertices))
        rows.append(f"{faces} | {opened} | {reason}".rstrip())
        i += 1
    return rows
