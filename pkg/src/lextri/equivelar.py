"""Arithmetic of equivelar maps and degree-constrained enumeration runs.

An equivelar map of type ``(p, q; n)`` has ``n`` vertices, every face a
``p``-gon and every vertex of degree ``q``.  Counting incidences gives
``q (p - 2) n = 2 p (n - chi)``; for triangulations (``p = 3``) this reads
``q = 6 - 6 chi / n``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterator

from .complex import Triangulation
from .enumerator import EnumerationConfig, enumerate_partition, enumerate_triangulations
from .topology import TopologicalType, classify_surface

TORUS_DEGREE = 6
TORUS_MIN_VERTICES = 7


@dataclass(frozen=True)
class EquivelarSpec:
    p: int
    q: int
    n: int
    chi: int

    def __post_init__(self):
        if self.p < 3 or self.q < 3:
            raise ValueError("p and q must be at least 3")
        if self.q * (self.p - 2) * self.n != 2 * self.p * (self.n - self.chi):
            raise ValueError(f"({self.p},{self.q};{self.n}) does not have Euler characteristic {self.chi}")

    def __str__(self) -> str:
        return f"({self.p},{self.q};{self.n})"


@dataclass(frozen=True)
class TorusFamily:
    """The infinite family of equivelar torus/Klein-bottle triangulations: q = 6, n >= 7."""

    q: int = TORUS_DEGREE
    n_min: int = TORUS_MIN_VERTICES

    def materialize(self, n_max: int) -> list[tuple[int, int]]:
        return [(n, self.q) for n in range(self.n_min, n_max + 1)]


def admissible_pairs(chi: int):
    """Vertex count and degree ``(n, q)`` of possible equivelar triangulations.

    For ``chi == 0`` the answer is infinite and a ``TorusFamily`` is returned.
    """
    if chi > 2:
        return []
    if chi == 0:
        return TorusFamily()
    m = 6 * abs(chi)
    out = []
    for n in range(1, m + 1):
        if m % n:
            continue
        q = 6 - 6 * chi // n
        if q >= 3 and n >= q + 1:
            out.append((n, q))
    return out


def _valid_type(p: int, q: int, n: int) -> bool:
    return p >= 3 and q >= 3 and n >= q + 1 and n > 2 * p


def admissible_triples(chi: int) -> list[tuple[int, int, int]]:
    """Types ``(p, q, n)`` of equivelar maps with negative Euler characteristic.

    Writes ``a = gcd(n, p)``, ``n = k a``, ``p = l a``; then ``k`` divides
    ``2|chi|`` and ``q = 2 + (4 + 2 l |chi| / k) / (l a - 2)``, which bounds ``a``.
    Only types whose dual ``(q, p; nq/p)`` is admissible as well are kept.
    Results are listed dual pair by dual pair, starting with the triangle case.
    """
    if chi >= 0:
        raise ValueError("triples are defined for negative Euler characteristic")
    c = abs(chi)
    found = set()
    for k in range(3, 2 * c + 1):
        if (2 * c) % k:
            continue
        for l in range(1, (k - 1) // 2 + 1):
            if gcd(k, l) != 1:
                continue
            top = Fraction(4 * k + 2 * l * c, k)
            a = 1
            while l * a - 2 <= top:
                p = l * a
                if p >= 3:
                    q = 2 + top / (p - 2)
                    if q.denominator == 1 and _valid_type(p, int(q), k * a):
                        found.add((p, int(q), k * a))
                a += 1
    out = []
    for p, q, n in found:
        dual_n = Fraction(n * q, p)
        if dual_n.denominator == 1 and _valid_type(q, p, int(dual_n)):
            out.append((p, q, n))
    out.sort(key=lambda t: (min(t[0], t[1]), -max(t[0], t[1]), t[0]))
    return out


def dual_type(spec: EquivelarSpec) -> EquivelarSpec:
    if (spec.n * spec.q) % spec.p:
        raise ValueError(f"dual of {spec} has a non-integral vertex count")
    return EquivelarSpec(spec.q, spec.p, spec.n * spec.q // spec.p, spec.chi)


def enumerate_equivelar(n: int, q: int, partition: tuple[int, int] | None = None
                        ) -> Iterator[tuple[Triangulation, TopologicalType]]:
    """All equivelar triangulations on ``n`` vertices of degree ``q``, classified."""
    if q < 3 or n < q + 1 or (n * q) % 3:
        raise ValueError(f"no equivelar triangulation with n={n}, q={q}")
    cfg = EnumerationConfig(dim=2, n=n, degree_constraint=q)
    stream = enumerate_triangulations(cfg) if partition is None else enumerate_partition(cfg, *partition)
    for T in stream:
        yield T, classify_surface(T)


def pairs_for(chi: int, n_max: int | None = None) -> list[tuple[int, int]]:
    pairs = admissible_pairs(chi)
    if isinstance(pairs, TorusFamily):
        if n_max is None:
            raise ValueError("the torus family is infinite; give n_max")
        return pairs.materialize(n_max)
    if n_max is not None:
        pairs = [(n, q) for n, q in pairs if n <= n_max]
    return pairs


def enumerate_equivelar_chi(chi: int, n_max: int | None = None
                            ) -> Iterator[tuple[Triangulation, TopologicalType]]:
    """Equivelar triangulations of every admissible ``(n, q)`` with Euler characteristic ``chi``."""
    for n, q in pairs_for(chi, n_max):
        for T, t in enumerate_equivelar(n, q):
            if t.euler == chi:
                yield T, t
