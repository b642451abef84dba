"""Command-line interface: ``lextri <subcommand> ...``.

Exit status is 0 on success, 1 when a check fails or an input is invalid,
and 2 on usage errors.
"""
from __future__ import annotations

import argparse
import heapq
import sys
from collections import Counter
from pathlib import Path
from typing import Iterable, Iterator

from . import io as lio
from .canonical import canonical_form
from .complex import Triangulation
from .enumerator import EnumerationConfig, enumerate_triangulations, render_trace, trace
from .equivelar import admissible_pairs, admissible_triples, TorusFamily
from .topology import MAX_NAMED_VERTICES, classify_3manifold, classify_surface


class CheckFailed(Exception):
    pass


def _slice_arg(text: str) -> tuple[int, int]:
    try:
        i, m = (int(x) for x in text.split("/"))
    except ValueError:
        raise argparse.ArgumentTypeError("expected I/M, e.g. 0/4") from None
    if m < 1 or not 0 <= i < m:
        raise argparse.ArgumentTypeError("slice must satisfy 0 <= I < M")
    return i, m


def _progress(nodes: int) -> None:
    print(f"... {nodes} nodes", file=sys.stderr, flush=True)


def type_key(T: Triangulation) -> tuple[bool | None, str]:
    if T.dim == 2:
        t = classify_surface(T)
        return t.orientable, str(t.genus)
    if T.n > MAX_NAMED_VERTICES:
        return None, "unclassified"
    t = classify_3manifold(T)
    return t.orientable, t.name


def count_rows(records: Iterable[Triangulation]) -> list[lio.CountRow]:
    counts: Counter = Counter()
    for T in records:
        o, key = type_key(T)
        counts[(T.n, T.dim, o, key)] += 1
    return lio.aggregate(lio.CountRow(*k, c) for k, c in counts.items())


# -- subcommands ---------------------------------------------------------------


def _config(args, partition=None) -> EnumerationConfig:
    return EnumerationConfig(dim=args.dim, n=args.vertices, degree_constraint=args.equivelar_degree,
                             partition=partition)


def _run_one(cfg: EnumerationConfig, fmt: str, out) -> tuple[int, str]:
    stream = enumerate_triangulations(cfg, progress=_progress)
    last = ""
    if fmt == "records":
        total = 0
        for T in stream:
            last = lio.serialize(T)
            out.write(last + "\n")
            total += 1
        return total, last
    rows = count_rows(stream)
    lio.emit_count_table(rows, out)
    return sum(r.count for r in rows), last


def cmd_enumerate(args) -> int:
    if args.jobs > 1:
        if args.out is None or args.out == "-":
            raise CheckFailed("--jobs needs --out")
        entries = []
        grand = 0
        for i in range(args.jobs):
            path = f"{args.out}.{i}-of-{args.jobs}"
            with lio.open_text(path, "w") as fh:
                total, last = _run_one(_config(args, (i, args.jobs)), args.format, fh)
            entries.append(lio.ManifestEntry(i, args.jobs, total, last))
            grand += total
        with lio.open_text(f"{args.out}.manifest", "w") as fh:
            lio.write_manifest(entries, fh)
        print(f"total {grand}", file=sys.stderr)
        return 0
    out = lio.open_text(args.out or "-", "w")
    try:
        total, last = _run_one(_config(args, args.slice), args.format, out)
    finally:
        if out is not sys.stdout:
            out.close()
    if args.manifest and args.slice:
        with lio.open_text(args.manifest, "w") as fh:
            lio.write_manifest([lio.ManifestEntry(*args.slice, total, last)], fh)
    print(f"total {total}", file=sys.stderr)
    return 0


def cmd_classify(args) -> int:
    records = (T for _, T in lio.read_records(args.input))
    try:
        rows = count_rows(records)
    except ValueError as exc:
        raise CheckFailed(str(exc)) from None
    with lio.open_text(args.out or "-", "w") as out:
        lio.emit_count_table(rows, out)
    return 0


def cmd_count(args) -> int:
    rows = []
    for path in args.input:
        with lio.open_text(path) as fh:
            rows.extend(lio.read_count_table(fh))
    rows = lio.aggregate(rows)
    with lio.open_text(args.out or "-", "w") as out:
        lio.emit_count_table(rows, out)
    print(f"total {sum(r.count for r in rows)}", file=sys.stderr)
    return 0


def cmd_equivelar(args) -> int:
    if args.kind == "triples":
        for p, q, n in admissible_triples(args.chi):
            print(f"({p},{q};{n})")
        return 0
    pairs = admissible_pairs(args.chi)
    if isinstance(pairs, TorusFamily):
        if args.n_max is None:
            print(f"(n,{pairs.q}) for every n >= {pairs.n_min}")
            return 0
        pairs = pairs.materialize(args.n_max)
    for n, q in pairs:
        print(f"({n},{q})")
    return 0


def cmd_verify(args) -> int:
    prev = None
    count = 0
    try:
        for lineno, T in lio.read_records(args.input, verify=True):
            if list(T.facets) != canonical_form(T.facets, verify=False):
                raise CheckFailed(f"line {lineno}: not in canonical form")
            if prev is not None and T.facets <= prev:
                raise CheckFailed(f"line {lineno}: not strictly lex-sorted")
            prev = T.facets
            count += 1
    except lio.RecordError as exc:
        raise CheckFailed(str(exc)) from None
    print(f"ok: {count} records", file=sys.stderr)
    return 0


def cmd_trace(args) -> int:
    rows = render_trace(trace(EnumerationConfig(dim=args.dim, n=args.vertices, trace=True)))
    with lio.open_text(args.out or "-", "w") as out:
        lio.write_trace(rows, out)
    return 0


def _stream(path: str, tag: int) -> Iterator[tuple[tuple, int, str]]:
    for _, T in lio.read_records(path):
        yield T.facets, tag, lio.serialize(T)


def cmd_merge(args) -> int:
    merged = heapq.merge(*(_stream(p, i) for i, p in enumerate(args.input)))
    prev = None
    total = 0
    out_path = Path(args.out)
    tmp = out_path.with_name(out_path.name + ".tmp")
    try:
        with lio.open_text(tmp, "w") as out:
            for facets, _, line in merged:
                if facets == prev:
                    raise CheckFailed(f"duplicate record across inputs: {line}")
                if prev is not None and facets < prev:
                    raise CheckFailed("an input file is not lex-sorted")
                out.write(line + "\n")
                prev = facets
                total += 1
    except (CheckFailed, lio.RecordError):
        tmp.unlink(missing_ok=True)
        raise
    tmp.replace(out_path)
    print(f"total {total}", file=sys.stderr)
    return 0


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lextri", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="enumerate triangulations")
    p.add_argument("--dim", type=int, choices=(2, 3), required=True)
    p.add_argument("--vertices", type=int, required=True)
    p.add_argument("--equivelar-degree", type=int)
    p.add_argument("--slice", type=_slice_arg)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    p.add_argument("--manifest", help="write a one-line slice manifest here")
    p.add_argument("--format", choices=("records", "counts"), default="records")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("classify", help="count records by topological type")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("count", help="re-aggregate count tables")
    p.add_argument("--in", dest="input", nargs="+", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("equivelar", help="admissible equivelar parameters")
    p.add_argument("--chi", type=int, required=True)
    p.add_argument("kind", choices=("pairs", "triples"))
    p.add_argument("--n-max", type=int, help="materialize the torus family up to this n")
    p.set_defaults(func=cmd_equivelar)

    p = sub.add_parser("verify", help="check a record file")
    p.add_argument("--in", dest="input", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("trace", help="step-by-step log of a small run")
    p.add_argument("--dim", type=int, choices=(2, 3), default=2)
    p.add_argument("--vertices", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("merge", help="merge slice outputs")
    p.add_argument("--in", dest="input", nargs="+", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_merge)
    return parser


def _validate(parser: argparse.ArgumentParser, args) -> None:
    if args.command == "enumerate":
        if args.equivelar_degree is not None and args.dim == 3:
            parser.error("--equivelar-degree cannot be combined with --dim 3")
        if args.jobs < 1:
            parser.error("--jobs must be positive")
        if args.jobs > 1 and args.slice:
            parser.error("--jobs and --slice are exclusive")
        try:
            _config(args, args.slice)
        except ValueError as exc:
            parser.error(str(exc))
    if args.command == "equivelar" and args.kind == "triples" and args.chi >= 0:
        parser.error("triples need a negative --chi")
    if args.command == "trace":
        try:
            EnumerationConfig(dim=args.dim, n=args.vertices)
        except ValueError as exc:
            parser.error(str(exc))


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(parser, args)
    try:
        return args.func(args)
    except (CheckFailed, lio.RecordError, AssertionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
