"""Loader for the shipped table of known solutions (app/data/records.json).

Every integer in the file is a decimal string so that the 31-digit entries
survive any JSON reader unchanged.
"""
import json
import logging
import re
from dataclasses import dataclass

from app.config import RECORDS_PATH
from app.errors import DomainError

log = logging.getLogger(__name__)

_DECIMAL = re.compile(r"(0|[1-9][0-9]*)\Z")


@dataclass(frozen=True)
class RecordRow:
    K: int
    primes: tuple
    minimal_exponent: int


def parse_decimal(text, field="value"):
    if not isinstance(text, str) or not _DECIMAL.match(text):
        raise DomainError(f"{field} must be a decimal string, got {text!r}")
    return int(text)


def _row(entry, index):
    try:
        return RecordRow(
            K=parse_decimal(entry["K"], f"records[{index}].K"),
            primes=tuple(parse_decimal(p, f"records[{index}].primes") for p in entry["primes"]),
            minimal_exponent=parse_decimal(entry["minimal_exponent"], f"records[{index}].minimal_exponent"),
        )
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed record #{index}: {entry!r}") from exc


def load_rows(path=None):
    path = path or RECORDS_PATH
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DomainError(f"records file {path} is not valid JSON: {exc}") from exc
    entries = data.get("records") if isinstance(data, dict) else None
    if not isinstance(entries, list):
        raise DomainError(f"records file {path} has no 'records' list")
    rows = [_row(entry, i) for i, entry in enumerate(entries)]
    log.debug("Loaded %d record rows from %s", len(rows), path)
    return rows


def dump_rows(rows):
    """JSON text for rows, in the same layout as the shipped file."""
    payload = {
        "records": [
            {"K": str(row.K), "primes": [str(p) for p in row.primes], "minimal_exponent": str(row.minimal_exponent)}
            for row in rows
        ]
    }
    return json.dumps(payload, indent=2) + "\n"
