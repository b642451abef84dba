import io

import pytest

from lextri.enumerator import EnumerationConfig, enumerate_triangulations
from lextri.io import (
    CountRow,
    ManifestEntry,
    RecordError,
    aggregate,
    emit_count_table,
    open_text,
    parse,
    read_count_table,
    read_manifest,
    read_records,
    serialize,
    write_manifest,
    write_records,
)

TETRA = "1 2 3;1 2 4;1 3 4;2 3 4"


def test_serialize_example():
    assert serialize([(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)]) == TETRA


def test_parse_example():
    T = parse(TETRA + "\n", verify=True)
    assert T.dim == 2 and T.n == 4 and T.f_vector == (4, 6, 4)


@pytest.mark.parametrize("dim,n", [(2, 6), (2, 7), (2, 8), (3, 6), (3, 7), (3, 8)])
def test_round_trip(dim, n):
    for T in enumerate_triangulations(EnumerationConfig(dim, n)):
        line = serialize(T)
        assert parse(line, verify=True) == T
        assert serialize(parse(line)) == line


@pytest.mark.parametrize("line", [
    "", "1 2 x;1 2 4", "1 2 3;1 2 4 5", "1 3 2;1 2 4", "1 2 3;1 2 3",
    "1 2 4;1 2 3", "0 1 2;1 2 3", "1 2 300;1 2 4", "1 2;1 3", "1  2 3",
])
def test_parse_rejects_malformed(line):
    with pytest.raises(RecordError):
        parse(line)


def test_verify_rejects_non_manifold():
    parse("1 2 3;1 2 4")
    with pytest.raises(RecordError):
        parse("1 2 3;1 2 4", verify=True)


def test_gzip_and_plain_files(tmp_path):
    out = list(enumerate_triangulations(EnumerationConfig(2, 7)))
    for name in ["r.txt", "r.txt.gz"]:
        path = tmp_path / name
        with open_text(path, "w") as fh:
            assert write_records(out, fh) == 9
        assert [T for _, T in read_records(path, verify=True)] == out


def test_read_records_reports_line_number(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text(TETRA + "\n\n1 2 3;1 2 3\n")
    with pytest.raises(RecordError, match="line 3"):
        list(read_records(path))


def test_count_table_round_trip():
    rows = [CountRow(8, 2, True, "0", 14), CountRow(8, 2, False, "2", 16), CountRow(8, 3, None, "S3", 39)]
    buf = io.StringIO()
    emit_count_table(rows, buf)
    text = buf.getvalue()
    assert text.splitlines()[0] == "n,dim,orientable,genus-or-name,count"
    assert text.splitlines()[3] == "8,3,,S3,39"
    assert read_count_table(io.StringIO(text)) == rows


def test_count_table_limits():
    with pytest.raises(ValueError):
        emit_count_table([CountRow(8, 2, True, "0", 1 << 64)], io.StringIO())
    with pytest.raises(ValueError):
        read_count_table(io.StringIO("a,b\n"))


def test_aggregate_sums_and_orders():
    rows = [CountRow(9, 2, False, "10", 1), CountRow(9, 2, False, "2", 3),
            CountRow(9, 2, True, "1", 2), CountRow(9, 2, False, "2", 4)]
    assert aggregate(rows) == [CountRow(9, 2, True, "1", 2), CountRow(9, 2, False, "2", 7),
                               CountRow(9, 2, False, "10", 1)]


def test_manifest_round_trip():
    entries = [ManifestEntry(0, 2, 20, "1 2 3;1 2 4"), ManifestEntry(1, 2, 23, "")]
    buf = io.StringIO()
    write_manifest(entries, buf)
    assert read_manifest(io.StringIO(buf.getvalue())) == entries
