"""Deterministic JSON report documents for the command-line tools.

A report captures everything needed to audit or reproduce a run: the tool
version, a digest of the exact input, the options in force, one record per
check performed (with its case tag, verdict, and evidence), and a summary
verdict.  Two runs with the same input and options produce byte-identical
reports apart from the timing fields, which live under dedicated keys
(``timings`` blocks and per-record ``seconds``) so they can be stripped
for comparison.

Exact rational values are serialized as ``"num/den"`` strings; they are
never converted to floats.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, is_dataclass, asdict
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional

from . import __version__

__all__ = [
    "TOOL_NAME",
    "ReportDocument",
    "rational_text",
    "json_ready",
    "input_digest",
    "without_timings",
    "reports_equal_modulo_timings",
    "worst_verdict",
    "VERDICT_CERTIFIED",
    "VERDICT_REFUTED",
    "VERDICT_INCONCLUSIVE",
    "VERDICT_UNSUPPORTED",
]

TOOL_NAME = "cycover"

# Summary verdict vocabulary, ordered from best to worst.
VERDICT_CERTIFIED = "CertifiedRegular"
VERDICT_INCONCLUSIVE = "Inconclusive"
VERDICT_UNSUPPORTED = "Unsupported"
VERDICT_REFUTED = "Refuted"

_SEVERITY = {
    VERDICT_CERTIFIED: 0,
    VERDICT_INCONCLUSIVE: 1,
    VERDICT_UNSUPPORTED: 2,
    VERDICT_REFUTED: 3,
}

# Keys that carry wall-clock measurements; excluded from determinism checks.
_TIMING_KEYS = frozenset({"timings", "seconds"})


def worst_verdict(verdicts) -> str:
    """The most severe verdict in the collection (certified when empty)."""
    worst = VERDICT_CERTIFIED
    for verdict in verdicts:
        if verdict not in _SEVERITY:
            raise ValueError(f"unknown verdict {verdict!r}")
        if _SEVERITY[verdict] > _SEVERITY[worst]:
            worst = verdict
    return worst


def rational_text(value) -> str:
    """Exact ``num/den`` rendering of a rational value."""
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def json_ready(value: Any) -> Any:
    """Recursively convert a value into JSON-serializable structures.

    Fractions become exact ``num/den`` strings, tuples become lists, and
    mappings keep their insertion order (which json.dumps preserves).
    Objects exposing ``text()`` (polynomials) are rendered canonically.
    """
    if isinstance(value, Fraction):
        return rational_text(value)
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, (int, str, float)):
        return value
    if isinstance(value, Mapping):
        return {str(key): json_ready(entry) for key, entry in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_ready(entry) for entry in value]
    if hasattr(value, "text") and callable(value.text):
        return value.text()
    if is_dataclass(value) and not isinstance(value, type):
        return json_ready(asdict(value))
    raise TypeError(f"cannot serialize {type(value).__name__} into a report")


def input_digest(text) -> str:
    """SHA-256 hex digest of the exact input bytes."""
    data = text.encode("utf-8") if isinstance(text, str) else bytes(text)
    return hashlib.sha256(data).hexdigest()


@dataclass
class ReportDocument:
    """One tool run: inputs, per-check records, summary, and timings."""

    command: str
    input_digest: str
    options: Dict[str, Any] = field(default_factory=dict)
    records: List[Dict[str, Any]] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)
    timings: Dict[str, Any] = field(default_factory=dict)

    def add_record(self, record: Dict[str, Any]) -> Dict[str, Any]:
        self.records.append(record)
        return record

    def as_dict(self) -> Dict[str, Any]:
        # Fixed field order keeps report bytes stable across runs.
        return {
            "tool": TOOL_NAME,
            "version": __version__,
            "command": self.command,
            "input_digest": self.input_digest,
            "options": json_ready(self.options),
            "records": json_ready(self.records),
            "summary": json_ready(self.summary),
            "timings": json_ready(self.timings),
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2) + "\n"


def without_timings(value: Any) -> Any:
    """A deep copy with every timing key removed, for byte comparisons."""
    if isinstance(value, dict):
        return {
            key: without_timings(entry)
            for key, entry in value.items()
            if key not in _TIMING_KEYS
        }
    if isinstance(value, list):
        return [without_timings(entry) for entry in value]
    return value


def reports_equal_modulo_timings(first: str, second: str) -> bool:
    """Compare two rendered reports, ignoring only the timing fields."""
    stripped_first = json.dumps(without_timings(json.loads(first)), indent=2)
    stripped_second = json.dumps(without_timings(json.loads(second)), indent=2)
    return stripped_first == stripped_second
