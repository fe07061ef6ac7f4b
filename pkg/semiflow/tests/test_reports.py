"""
Tests for report envelopes and JSON conversion.
"""

import io
import json
import math
from dataclasses import dataclass

import numpy as np

from semiflow import __version__
from semiflow.cplane import INFINITY
from semiflow.errors import DomainViolation
from semiflow.reports import (
    TOOL,
    dumps_payload,
    dumps_report,
    envelope,
    error_payload,
    number,
    to_jsonable,
    write_report,
)


@dataclass
class _Point:
    name: str
    z: complex


class TestToJsonable:
    """Conversion of report values."""

    def test_scalars(self):
        assert to_jsonable(1 + 2j) == [1.0, 2.0]
        assert to_jsonable(np.float64(0.5)) == 0.5
        assert to_jsonable(np.int64(3)) == 3
        assert to_jsonable(np.bool_(True)) is True
        assert to_jsonable(INFINITY) == "infinity"
        assert to_jsonable(math.inf) == "inf"
        assert to_jsonable(-math.inf) == "-inf"
        assert to_jsonable(math.nan) == "nan"
        assert to_jsonable(None) is None

    def test_containers(self):
        value = {"rows": (np.array([1.0, 2.0]), [1j]), 3: "x"}
        assert to_jsonable(value) == {"rows": [[1.0, 2.0], [[0.0, 1.0]]], "3": "x"}

    def test_dataclass_and_to_dict(self):
        assert to_jsonable(_Point("p", 1j)) == {"name": "p", "z": [0.0, 1.0]}

        class WithDict:
            def to_dict(self):
                return {"value": math.nan}

        assert to_jsonable(WithDict()) == {"value": "nan"}


class TestEnvelope:
    """Header and payload."""

    def test_header(self):
        document = envelope("rate", {"a": 1}, timestamp="2024-01-01T00:00:00+00:00")
        assert document["header"] == {
            "tool": TOOL,
            "version": __version__,
            "command": "rate",
            "timestamp": "2024-01-01T00:00:00+00:00",
        }
        assert document["payload"] == {"a": 1}

    def test_dumps_is_deterministic(self):
        payload = {"b": [1 + 1j], "a": math.inf}
        first = dumps_report("verify", payload, timestamp="t")
        second = dumps_report("verify", payload, timestamp="t")
        assert first == second
        assert first.endswith("\n")
        assert json.loads(first)["payload"] == {"a": "inf", "b": [[1.0, 1.0]]}

    def test_payload_alone(self):
        report = json.loads(dumps_report("x", {"z": 1j}, timestamp="t"))
        assert json.loads(dumps_payload({"z": 1j})) == report["payload"]

    def test_write_report(self, tmp_path):
        out = tmp_path / "report.json"
        text = write_report("catalog", {"entries": []}, out=str(out))
        assert out.read_text() == text
        stream = io.StringIO()
        write_report("catalog", {"entries": []}, stream=stream)
        assert json.loads(stream.getvalue())["header"]["command"] == "catalog"

    def test_error_payload(self):
        payload = error_payload(DomainViolation("outside", 2 + 1j), suite="demo")
        assert payload == {
            "error": {"type": "DomainViolation", "message": "outside", "point": 2 + 1j},
            "passed": False,
            "suite": "demo",
        }
        document = json.loads(dumps_report("verify", payload))
        assert document["payload"]["error"]["point"] == [2.0, 1.0]
        assert error_payload(KeyError("k"))["error"]["point"] is None

    def test_number(self):
        assert number(0.1) == "0.10000000000000001"
        assert number(2) == "2"
