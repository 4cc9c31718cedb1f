"""Tests for deterministic report documents."""

import json
from fractions import Fraction

import pytest

from cycover.poly import QQ, ring_over
from cycover.report import (
    VERDICT_CERTIFIED,
    VERDICT_INCONCLUSIVE,
    VERDICT_REFUTED,
    VERDICT_UNSUPPORTED,
    ReportDocument,
    input_digest,
    json_ready,
    rational_text,
    reports_equal_modulo_timings,
    without_timings,
    worst_verdict,
)


class TestScalars:
    def test_rational_text_is_exact(self):
        assert rational_text(Fraction(9, 25)) == "9/25"
        assert rational_text(Fraction(-1, 2)) == "-1/2"
        assert rational_text(3) == "3/1"
        assert rational_text(Fraction(0)) == "0/1"

    def test_input_digest_is_sha256(self):
        assert input_digest("abc") == (
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        )
        assert input_digest(b"abc") == input_digest("abc")

    def test_json_ready_converts_fractions_and_tuples(self):
        data = {"a": Fraction(1, 3), "b": (1, 2), "c": [Fraction(2), None]}
        assert json_ready(data) == {"a": "1/3", "b": [1, 2], "c": ["2/1", None]}

    def test_json_ready_renders_polynomials(self):
        ring = ring_over(("x0",), QQ)
        assert json_ready({"p": ring.gen(0) + ring.one()}) == {"p": "x0 + 1"}

    def test_json_ready_rejects_unknown_objects(self):
        with pytest.raises(TypeError):
            json_ready({"bad": object()})


class TestVerdicts:
    def test_ordering(self):
        assert worst_verdict([]) == VERDICT_CERTIFIED
        assert worst_verdict([VERDICT_CERTIFIED]) == VERDICT_CERTIFIED
        assert (
            worst_verdict([VERDICT_CERTIFIED, VERDICT_INCONCLUSIVE])
            == VERDICT_INCONCLUSIVE
        )
        assert (
            worst_verdict([VERDICT_UNSUPPORTED, VERDICT_INCONCLUSIVE])
            == VERDICT_UNSUPPORTED
        )
        assert (
            worst_verdict(
                [VERDICT_CERTIFIED, VERDICT_REFUTED, VERDICT_UNSUPPORTED]
            )
            == VERDICT_REFUTED
        )

    def test_unknown_verdict_rejected(self):
        with pytest.raises(ValueError, match="unknown verdict"):
            worst_verdict(["maybe"])


class TestDocument:
    def make(self, seconds: float) -> ReportDocument:
        doc = ReportDocument(command="demo", input_digest=input_digest("in"))
        doc.options = {"seed": 7, "threshold": Fraction(4, 8)}
        doc.add_record(
            {
                "kind": "check",
                "bound": Fraction(9, 25),
                "verdict": VERDICT_CERTIFIED,
                "seconds": seconds,
            }
        )
        doc.summary = {"verdict": VERDICT_CERTIFIED}
        doc.timings = {"total_seconds": seconds * 2}
        return doc

    def test_field_order_is_stable(self):
        doc = self.make(0.5)
        keys = list(json.loads(doc.to_json()).keys())
        assert keys == [
            "tool",
            "version",
            "command",
            "input_digest",
            "options",
            "records",
            "summary",
            "timings",
        ]

    def test_rationals_serialized_exactly(self):
        payload = json.loads(self.make(0.5).to_json())
        assert payload["options"]["threshold"] == "1/2"
        assert payload["records"][0]["bound"] == "9/25"

    def test_timings_stripped_for_comparisons(self):
        fast = self.make(0.25).to_json()
        slow = self.make(123.75).to_json()
        assert fast != slow
        assert reports_equal_modulo_timings(fast, slow)

    def test_non_timing_differences_detected(self):
        base = self.make(1.0)
        other = self.make(1.0)
        other.records[0]["bound"] = Fraction(1, 2)
        assert not reports_equal_modulo_timings(base.to_json(), other.to_json())

    def test_without_timings_strips_nested_keys(self):
        data = {
            "timings": {"total_seconds": 1},
            "records": [{"seconds": 2, "value": 3}],
        }
        assert without_timings(data) == {"records": [{"value": 3}]}
