"""Topological invariants of closed triangulated surfaces and 3-manifolds."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations
from math import gcd
from typing import Sequence

from .complex import Facet, Triangulation, f_vector, is_connected

S3 = "S3"
S2xS1 = "S2xS1"
S2_TWIST_S1 = "S2twistS1"
RP3 = "RP3"

# (orientable, rank H1, torsion of H1) -> name; valid for at most 11 vertices,
# where no other homology profile can occur
_NAMED_PROFILES = {
    (True, 0, ()): S3,
    (True, 1, ()): S2xS1,
    (False, 1, ()): S2_TWIST_S1,
    (True, 0, (2,)): RP3,
}
MAX_NAMED_VERTICES = 11

Homology = list[tuple[int, list[int]]]


@dataclass(frozen=True)
class TopologicalType:
    dim: int
    euler: int
    orientable: bool
    genus: int | None = None
    homology: tuple[tuple[int, tuple[int, ...]], ...] | None = None
    name: str | None = None

    @property
    def label(self) -> str:
        """Genus for surfaces, the manifold name for 3-manifolds."""
        if self.dim == 2:
            return str(self.genus)
        return self.name or "unknown"


def _facets(T) -> list[Facet]:
    if isinstance(T, Triangulation):
        return list(T.facets)
    return sorted(tuple(sorted(f)) for f in T)


def euler_characteristic(T) -> int:
    fv = f_vector(_facets(T))
    return sum(f if i % 2 == 0 else -f for i, f in enumerate(fv))


def is_orientable(T) -> bool:
    """Propagate an orientation across shared ridges; False on a contradiction."""
    fs = _facets(T)
    by_ridge: dict[Facet, list[tuple[int, int]]] = {}
    for i, f in enumerate(fs):
        for j in range(len(f)):
            # removing the j-th vertex induces sign (-1)^j on that ridge
            by_ridge.setdefault(f[:j] + f[j + 1:], []).append((i, 1 if j % 2 == 0 else -1))
    sign = [0] * len(fs)
    for start in range(len(fs)):
        if sign[start]:
            continue
        sign[start] = 1
        todo = deque([start])
        while todo:
            i = todo.popleft()
            f = fs[i]
            for j in range(len(f)):
                r = f[:j] + f[j + 1:]
                mine = sign[i] * (1 if j % 2 == 0 else -1)
                for k, s in by_ridge[r]:
                    if k == i:
                        continue
                    want = -mine * s
                    if sign[k] == 0:
                        sign[k] = want
                        todo.append(k)
                    elif sign[k] != want:
                        return False
    return True


def genus(T) -> int:
    fs = _facets(T)
    if len(fs[0]) != 3:
        raise ValueError("genus is defined for surfaces only")
    if not is_connected(fs):
        raise ValueError("genus of a disconnected surface is not defined")
    chi = euler_characteristic(fs)
    return (2 - chi) // 2 if is_orientable(fs) else 2 - chi


def smith_normal_form(A: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], int]:
    """Invariant factors ``d1 | d2 | ...`` of an integer matrix, and its rank.

    Pivots on the entry of smallest magnitude; Python integers never overflow.
    """
    M = [list(row) for row in A]
    m = len(M)
    ncols = len(M[0]) if m else 0
    t = 0
    while t < min(m, ncols):
        while True:
            best = None
            for i in range(t, m):
                row = M[i]
                for j in range(t, ncols):
                    x = row[j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
                        if best[0] == 1:
                            break
                if best is not None and best[0] == 1:
                    break
            if best is None:
                break
            _, i, j = best
            M[t], M[i] = M[i], M[t]
            if j != t:
                for row in M:
                    row[t], row[j] = row[j], row[t]
            p = M[t][t]
            clean = True
            prow = M[t]
            for i in range(t + 1, m):
                x = M[i][t]
                if x:
                    q = x // p
                    row = M[i]
                    for j in range(t, ncols):
                        if prow[j]:
                            row[j] -= q * prow[j]
                    if row[t]:
                        clean = False
            for j in range(t + 1, ncols):
                x = prow[j]
                if x:
                    q = x // p
                    for row in M:
                        if row[t]:
                            row[j] -= q * row[t]
                    if prow[j]:
                        clean = False
            if clean:
                break
        if best is None:
            break
        t += 1
    diag = [abs(M[i][i]) for i in range(t)]
    # enforce the divisibility chain
    for i in range(len(diag)):
        for j in range(i + 1, len(diag)):
            a, b = diag[i], diag[j]
            g = gcd(a, b)
            diag[i], diag[j] = g, a * b // g
    return tuple(diag), t


def _faces_by_dim(fs: list[Facet]) -> list[list[Facet]]:
    dim = len(fs[0]) - 1
    faces = [set() for _ in range(dim + 1)]
    for f in fs:
        for k in range(1, dim + 2):
            faces[k - 1].update(combinations(f, k))
    return [sorted(s) for s in faces]


def boundary_matrix(faces: list[list[Facet]], k: int) -> list[list[int]]:
    """Matrix of the boundary map from k-faces to (k-1)-faces."""
    rows = {s: i for i, s in enumerate(faces[k - 1])}
    M = [[0] * len(faces[k]) for _ in rows]
    for j, s in enumerate(faces[k]):
        for i in range(len(s)):
            M[rows[s[:i] + s[i + 1:]]][j] = 1 if i % 2 == 0 else -1
    return M


def homology(T) -> Homology:
    """Integral homology ``[(betti, torsion), ...]`` in dimensions 0..dim."""
    fs = _facets(T)
    faces = _faces_by_dim(fs)
    dim = len(faces) - 1
    snf = [((), 0)] + [smith_normal_form(boundary_matrix(faces, k)) for k in range(1, dim + 1)]
    out = []
    for k in range(dim + 1):
        rank_k = snf[k][1]
        upper = snf[k + 1] if k < dim else ((), 0)
        betti = len(faces[k]) - rank_k - upper[1]
        out.append((betti, [d for d in upper[0] if d > 1]))
    return out


def _freeze(h: Homology):
    return tuple((b, tuple(t)) for b, t in h)


def classify_surface(T, with_homology: bool = False) -> TopologicalType:
    fs = _facets(T)
    if len(fs[0]) != 3:
        raise ValueError("not a surface")
    chi = euler_characteristic(fs)
    orient = is_orientable(fs)
    g = (2 - chi) // 2 if orient else 2 - chi
    h = _freeze(homology(fs)) if with_homology else None
    return TopologicalType(2, chi, orient, g, h)


def first_homology(fs: list[Facet]) -> tuple[int, tuple[int, ...]]:
    """H1 of a connected complex from the edge and triangle boundary maps only."""
    faces = _faces_by_dim(fs)[:3]
    factors, rank2 = smith_normal_form(boundary_matrix(faces, 2))
    # connected: the edge boundary map has rank f0 - 1
    betti = len(faces[1]) - (len(faces[0]) - 1) - rank2
    return betti, tuple(d for d in factors if d > 1)


def classify_3manifold(T) -> TopologicalType:
    """Name a closed 3-manifold with at most 11 vertices from orientability and H1."""
    fs = _facets(T)
    if len(fs[0]) != 4:
        raise ValueError("not a 3-manifold")
    n = len({x for f in fs for x in f})
    if n > MAX_NAMED_VERTICES:
        raise ValueError(f"homology does not determine the type beyond {MAX_NAMED_VERTICES} vertices")
    if not is_connected(fs):
        raise ValueError("complex is disconnected")
    chi = euler_characteristic(fs)
    orient = is_orientable(fs)
    h1 = first_homology(fs)
    name = _NAMED_PROFILES.get((orient, h1[0], h1[1]))
    if name is None:
        raise ValueError(f"unexpected homology profile: orientable={orient}, H1 rank {h1[0]}, torsion {h1[1]}")
    return TopologicalType(3, chi, orient, None, None, name)


def classify(T) -> TopologicalType:
    fs = _facets(T)
    if len(fs[0]) == 3:
        return classify_surface(fs)
    return classify_3manifold(fs)
