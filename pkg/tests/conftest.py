import io
import json

import pytest

from app import cli
from app.records import RecordRow, dump_rows, load_rows

SMALL_PPP = (2, 6, 42, 1806, 47058)


@pytest.fixture
def findings_db(tmp_path):
    return str(tmp_path / "findings.db")


@pytest.fixture
def store(findings_db):
    from app.findings import FindingsStore

    s = FindingsStore(findings_db, max_rows=5)
    yield s
    s.close()


@pytest.fixture
def shipped_rows():
    return load_rows()


@pytest.fixture
def records_file(tmp_path, shipped_rows):
    """A private copy of the shipped records, safe to mutate."""
    path = tmp_path / "records.json"
    path.write_text(dump_rows(shipped_rows), encoding="utf-8")
    return str(path)


@pytest.fixture
def broken_records_file(tmp_path, shipped_rows):
    """Shipped records with 47059 swapped for 47057 in the r = 6 row."""
    rows = []
    for row in shipped_rows:
        if row.K == 2214502422:
            row = RecordRow(row.K, tuple(47057 if p == 47059 else p for p in row.primes), row.minimal_exponent)
        rows.append(row)
    path = tmp_path / "broken.json"
    path.write_text(dump_rows(rows), encoding="utf-8")
    return str(path)


class CliResult:
    def __init__(self, code, output):
        self.code = code
        self.output = output

    @property
    def report(self):
        return json.loads(self.output)


@pytest.fixture
def run_cli():
    def _run(*argv):
        out = io.StringIO()
        code = cli.run([str(a) for a in argv], stdout=out)
        return CliResult(code, out.getvalue())
    return _run
