"""Unit tests for verdicts, exit codes and rendered reports."""

import json
import tomllib

import pytest

from hyperbench.backend.errors import CapExceededError, StructureError, UndeterminedError
from hyperbench.backend.report import ReportOfViolations, Violation, ViolationCollector
from hyperbench.frontend.reporting import (
    EXIT_CODES,
    SEVERITY,
    Report,
    Verdict,
    guarded,
    verdict_of,
)
from hyperbench.utils.helper import content_hash, resolve_builtin


class TestVerdict:
    """Verdicts built from reports."""

    def test_to_dict_drops_empty_fields(self) -> None:
        """Only the check and verdict remain for a bare pass."""
        assert Verdict("c", "pass").to_dict() == {"check": "c", "verdict": "pass"}
        full = Verdict("c", "undetermined", facts={"a": 1}, bound=3, message="m")
        assert full.to_dict() == {
            "check": "c",
            "verdict": "undetermined",
            "facts": {"a": 1},
            "bound": 3,
            "message": "m",
        }

    def test_verdict_of(self) -> None:
        """Violations become witnesses of a failing verdict."""
        report = ReportOfViolations("s", (Violation("assoc", (0, 1, 2), 2),), {"n": 3})
        v = verdict_of("check", report)
        assert v.status == "fail"
        assert v.witnesses == ({"axiom": "assoc", "witness": [0, 1, 2], "count": 2},)
        assert v.facts == {"n": 3}
        assert verdict_of("check", ReportOfViolations("s")).status == "pass"


class TestGuarded:
    """Exhausted bounds and caps become verdicts; other errors propagate."""

    def test_pass(self) -> None:
        """A clean report passes."""
        out = ViolationCollector("s")
        out.fact("k", 1)
        v = guarded("c", out.build)
        assert v.status == "pass"
        assert v.facts == {"k": 1}

    def test_undetermined(self) -> None:
        """UndeterminedError carries its bound."""

        def run() -> ReportOfViolations:
            raise UndeterminedError(2)

        v = guarded("c", run)
        assert v.status == "undetermined"
        assert v.bound == 2
        assert "L=2" in (v.message or "")

    def test_cap(self) -> None:
        """CapExceededError records the limit and the requested size."""

        def run() -> ReportOfViolations:
            raise CapExceededError(10, 64, "subsets")

        v = guarded("c", run)
        assert v.status == "cap"
        assert v.facts == {"limit": 10, "required": 64}
        assert v.message == "subsets needs 64 candidates, cap is 10"

    def test_structure_error_propagates(self) -> None:
        """Input errors are not turned into verdicts."""

        def run() -> ReportOfViolations:
            raise StructureError("bad")

        with pytest.raises(StructureError):
            guarded("c", run)


class TestReport:
    """Severity, exit codes and rendering."""

    @pytest.fixture(autouse=True)  # type: ignore
    def setup(self) -> None:
        """Create an empty report."""
        self.report = Report(["check", "builtin:B"])

    def test_empty_report_passes(self) -> None:
        """No verdict means pass and exit 0."""
        assert self.report.status == "pass"
        assert self.report.exit_code == 0

    @pytest.mark.parametrize(
        "statuses,expected",
        [
            (["pass", "fail"], "fail"),
            (["fail", "undetermined", "pass"], "undetermined"),
            (["undetermined", "cap"], "cap"),
            (["cap", "error", "fail"], "error"),
        ],
    )
    def test_most_severe_wins(self, statuses: list[str], expected: str) -> None:
        """The worst verdict decides the status and exit code."""
        for i, s in enumerate(statuses):
            self.report.add(Verdict(f"c{i}", s))
        assert self.report.status == expected
        assert self.report.exit_code == EXIT_CODES[expected]

    def test_exit_codes(self) -> None:
        """Every status has a distinct code."""
        assert EXIT_CODES == {"pass": 0, "fail": 1, "undetermined": 2, "error": 3, "cap": 4}
        assert set(SEVERITY) == set(EXIT_CODES)

    def test_fingerprint(self) -> None:
        """Input hashes are keyed by source."""
        s = resolve_builtin("builtin:B")
        self.report.fingerprint(s)
        assert self.report.hashes == {"builtin:B": content_hash(s)}

    def test_timed(self) -> None:
        """The enclosed block is timed."""
        with self.report.timed():
            sum(range(1000))
        assert self.report.elapsed >= 0.0

    def test_render_json(self) -> None:
        """JSON output round-trips through json.loads."""
        self.report.add(Verdict("c", "fail", ({"axiom": "a", "witness": [1], "count": 1},)))
        self.report.output["classes"] = 2
        data = json.loads(self.report.render("json"))
        assert data["status"] == "fail"
        assert data["command"] == ["check", "builtin:B"]
        assert data["verdicts"][0]["witnesses"][0]["axiom"] == "a"
        assert data["output"] == {"classes": 2}

    def test_render_toml_drops_none(self) -> None:
        """TOML has no null, so None values are left out."""
        self.report.settings = {"bound": 4, "seed": None}
        self.report.output = {"values": [1, None, 2], "nested": {"k": None, "v": "x"}}
        data = tomllib.loads(self.report.render("toml"))
        assert data["settings"] == {"bound": 4}
        assert data["output"] == {"values": [1, 2], "nested": {"v": "x"}}
        assert data["status"] == "pass"
