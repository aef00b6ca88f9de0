"""Machine-readable command reports.

Integers are written as decimal strings, keys keep insertion order, and the
rendering has no timestamps, so equal inputs give byte-identical output.
"""
import dataclasses
import json
from dataclasses import dataclass, field

from app.bigmod import Residue
from app.config import VERSION

EXPLORATION = "exploration"


def to_plain(value):
    """Convert results into JSON-ready values with every integer as a decimal string."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return value
    if isinstance(value, Residue):
        return {"value": str(value.value), "modulus": str(value.modulus)}
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: to_plain(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, dict):
        return {str(key): to_plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(item) for item in value]
    return str(value)


@dataclass
class Report:
    command: str
    inputs: dict = field(default_factory=dict)
    verdict: object = None  # True, False or EXPLORATION
    details: object = None
    findings: list = field(default_factory=list)
    version: str = VERSION

    def to_dict(self):
        return {
            "command": self.command,
            "inputs": to_plain(self.inputs),
            "verdict": self.verdict,
            "details": to_plain(self.details),
            "findings": [str(f) for f in self.findings],
            "version": self.version,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"
