"""Text formats: triangulation records, count tables, slice manifests, trace logs.

A record is one line per triangulation: facets in lex order joined by ``;``,
each facet its decimal labels joined by single spaces, e.g.
``1 2 3;1 2 4;1 3 4;2 3 4``.
"""
from __future__ import annotations

import csv
import gzip
import io
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Iterator, Sequence

from .complex import MAX_LABEL, Facet, Triangulation, f_vector, verify_manifold

COUNT_COLUMNS = ("n", "dim", "orientable", "genus-or-name", "count")
MANIFEST_COLUMNS = ("slice", "modulus", "emitted", "last")


class RecordError(ValueError):
    pass


def serialize(T: Triangulation | Sequence[Facet]) -> str:
    facets = T.facets if isinstance(T, Triangulation) else T
    return ";".join(" ".join(map(str, f)) for f in facets)


def parse(line: str, verify: bool = False) -> Triangulation:
    """Parse one record.

    Raw parsing checks syntax, facet shape, sorted order, duplicates and the
    label range.  With ``verify`` the complex must also be a closed connected
    combinatorial manifold on the labels ``1..n``.
    """
    text = line.strip()
    if not text:
        raise RecordError("empty record")
    facets: list[Facet] = []
    for part in text.split(";"):
        try:
            f = tuple(int(x) for x in part.split(" "))
        except ValueError:
            raise RecordError(f"malformed facet {part!r}") from None
        if any(x < 1 or x > MAX_LABEL for x in f):
            raise RecordError(f"label out of range in {part!r}")
        if any(a >= b for a, b in zip(f, f[1:])):
            raise RecordError(f"facet {part!r} is not strictly increasing")
        facets.append(f)
    dims = {len(f) for f in facets}
    if len(dims) != 1 or dims.pop() not in (3, 4):
        raise RecordError("facets must all be triangles or all tetrahedra")
    for a, b in zip(facets, facets[1:]):
        if a == b:
            raise RecordError(f"duplicate facet {serialize([a])!r}")
        if a > b:
            raise RecordError("facets are not in lex order")
    if verify:
        try:
            verify_manifold(facets)
        except ValueError as exc:
            raise RecordError(str(exc)) from None
    n = max(f[-1] for f in facets)
    return Triangulation(len(facets[0]) - 1, n, tuple(facets), f_vector(facets))


def open_text(path: str | Path, mode: str = "r") -> IO[str]:
    """Open a text file, transparently handling ``.gz``; ``-`` is stdin/stdout."""
    import sys

    if str(path) == "-":
        return sys.stdin if "r" in mode else sys.stdout
    if str(path).endswith(".gz"):
        return io.TextIOWrapper(gzip.open(path, mode.replace("t", "") + "b"), encoding="utf-8", newline="\n")
    return open(path, mode, encoding="utf-8", newline="\n")


def read_records(path: str | Path, verify: bool = False) -> Iterator[tuple[int, Triangulation]]:
    """Yield ``(line number, triangulation)``; blank lines are skipped."""
    with open_text(path) as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                yield lineno, parse(line, verify)
            except RecordError as exc:
                raise RecordError(f"line {lineno}: {exc}") from None


def write_records(records: Iterable[Triangulation], fh: IO[str]) -> int:
    count = 0
    for T in records:
        fh.write(serialize(T) + "\n")
        count += 1
    return count


def sort_key(T: Triangulation) -> tuple[Facet, ...]:
    return T.facets


# -- count tables ---------------------------------------------------------------


@dataclass(frozen=True)
class CountRow:
    n: int
    dim: int
    orientable: bool | None
    key: str
    count: int


def _fmt_orientable(o: bool | None) -> str:
    return "" if o is None else ("true" if o else "false")


def emit_count_table(rows: Iterable[CountRow], fh: IO[str]) -> None:
    """CSV with the fixed columns n, dim, orientable, genus-or-name, count."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(COUNT_COLUMNS)
    for r in rows:
        if r.count < 0 or r.count >= 1 << 64:
            raise ValueError("count does not fit an unsigned 64-bit integer")
        w.writerow((r.n, r.dim, _fmt_orientable(r.orientable), r.key, r.count))


def read_count_table(fh: IO[str]) -> list[CountRow]:
    rows = []
    reader = csv.reader(fh)
    header = next(reader, None)
    if tuple(header or ()) != COUNT_COLUMNS:
        raise ValueError(f"unexpected count table header {header}")
    for rec in reader:
        n, dim, o, key, count = rec
        rows.append(CountRow(int(n), int(dim), None if o == "" else o == "true", key, int(count)))
    return rows


def aggregate(rows: Iterable[CountRow]) -> list[CountRow]:
    """Sum counts per key; orientable types first, then by genus or name."""
    total: Counter = Counter()
    for r in rows:
        total[(r.n, r.dim, r.orientable, r.key)] += r.count

    def order(k):
        n, dim, o, key = k
        return (n, dim, o is None, not o, (0, int(key), "") if key.isdigit() else (1, 0, key))

    return [CountRow(*k, total[k]) for k in sorted(total, key=order)]


# -- slice manifests ---------------------------------------------------------


@dataclass(frozen=True)
class ManifestEntry:
    slice: int
    modulus: int
    emitted: int
    last: str


def write_manifest(entries: Iterable[ManifestEntry], fh: IO[str]) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(MANIFEST_COLUMNS)
    for e in entries:
        w.writerow((e.slice, e.modulus, e.emitted, e.last))


def read_manifest(fh: IO[str]) -> list[ManifestEntry]:
    reader = csv.reader(fh)
    header = next(reader, None)
    if tuple(header or ()) != MANIFEST_COLUMNS:
        raise ValueError(f"unexpected manifest header {header}")
    return [ManifestEntry(int(i), int(m), int(e), last) for i, m, e, last in reader]


# -- trace logs ----------------------------------------------------------------


def write_trace(rows: Iterable[str], fh: IO[str]) -> None:
    for row in rows:
        fh.write(row.rstrip() + "\n")
