"""Unit tests for the command-line entry point."""

import json
import tomllib
from pathlib import Path
from typing import Any

import polars as pl
import pytest
from click.testing import CliRunner, Result

from hyperbench.cli import cli
from hyperbench.utils.helper import emit, resolve_builtin

NON_ASSOCIATIVE = {
    "module": {
        "carrier": ["0", "1", "2"],
        "zero": "0",
        "add": [[0, 1, 2], [1, 0, 0], [2, 0, 1]],
    },
}


class TestCli:
    """Reports and exit codes of every command."""

    @pytest.fixture(autouse=True)  # type: ignore
    def setup(self) -> None:
        """Create a runner."""
        self.runner = CliRunner()

    def invoke(self, *args: str) -> Result:
        """Invoke the CLI with the given arguments."""
        return self.runner.invoke(cli, list(args))

    def report(self, *args: str) -> dict[str, Any]:
        """Invoke the CLI and parse its JSON report."""
        result = self.invoke(*args)
        data: dict[str, Any] = json.loads(result.stdout)
        data["exit_code"] = result.exit_code
        return data

    def test_check_pass(self) -> None:
        """The Krasner hyperfield passes its suite."""
        data = self.report("check", "builtin:krasner", "--suite", "hyperfield")
        assert data["exit_code"] == 0
        assert data["status"] == "pass"
        assert [v["check"] for v in data["verdicts"]] == ["hyperfield"]
        assert "builtin:krasner" in data["inputs"]

    def test_check_fail(self, tmp_path: Path) -> None:
        """A non-associative addition fails with a witness and exit 1."""
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(NON_ASSOCIATIVE), encoding="utf-8")
        data = self.report("check", str(path), "--suite", "module")
        assert data["exit_code"] == 1
        assert data["verdicts"][0]["verdict"] == "fail"
        assert data["verdicts"][0]["witnesses"]

    @pytest.mark.parametrize(
        "args",
        [
            ("check", "builtin:B", "--suite", "nope"),
            ("check", "builtin:nope"),
            ("repro", "nope"),
            ("census", "--order", "2", "--suite", "nope"),
        ],
    )
    def test_input_errors(self, args: tuple[str, ...]) -> None:
        """Unknown suites, structures and cases exit 3 with an error verdict."""
        data = self.report(*args)
        assert data["exit_code"] == 3
        assert data["verdicts"][-1]["verdict"] == "error"

    def test_undetermined(self) -> None:
        """B (x) B does not saturate at L=2."""
        data = self.report("--bound", "2", "tensor", "builtin:B", "builtin:B")
        assert data["exit_code"] == 2
        assert data["verdicts"][0]["bound"] == 2

    def test_tensor_pass(self) -> None:
        """Bsr (x) Bsr has two classes."""
        data = self.report("tensor", "builtin:Bsr", "builtin:Bsr")
        assert data["exit_code"] == 0
        assert data["verdicts"][0]["facts"] == {"classes": 2}

    def test_cap(self) -> None:
        """A census larger than the cap exits 4."""
        data = self.report("--cap", "100", "census", "--order", "3", "--suite", "hypermagma")
        assert data["exit_code"] == 4
        assert data["verdicts"][0]["facts"] == {"limit": 100, "required": 512}

    def test_census_out(self, tmp_path: Path) -> None:
        """Census tables are counted and streamed as NDJSON."""
        out = tmp_path / "census.ndjson"
        data = self.report("census", "--order", "2", "--out", str(out))
        assert data["exit_code"] == 0
        assert data["verdicts"][0]["facts"] == {"tables": 2}
        assert pl.read_ndjson(out).height == 2

    def test_quotient(self, tmp_path: Path) -> None:
        """F3 modulo {1,2} is written as a hypermagma structure file."""
        out = tmp_path / "k.json"
        data = self.report("quotient", "builtin:F3", "--subgroup", "1,2", "--out", str(out))
        assert data["exit_code"] == 0
        assert data["output"]["classes"] == [["0"], ["1", "2"]]
        written = json.loads(out.read_text(encoding="utf-8"))
        assert "1+1 = {0,1}" in written["hypermagma"]["add"]

    def test_classify(self, tmp_path: Path) -> None:
        """The identity of B carries the homomorphism flag."""
        map_file = tmp_path / "id.map"
        map_file.write_text("f(0) = 0\nf(1) = 1\n", encoding="utf-8")
        data = self.report(
            "morphism", "classify", str(map_file), "--from", "builtin:B", "--to", "builtin:B",
        )
        assert data["exit_code"] == 0
        assert "homomorphism" in data["verdicts"][0]["facts"]["flags"]

    def test_classify_missing_map(self, tmp_path: Path) -> None:
        """An unreadable map file is an input error."""
        missing = str(tmp_path / "none.map")
        data = self.report(
            "morphism", "classify", missing, "--from", "builtin:B", "--to", "builtin:B",
        )
        assert data["exit_code"] == 3

    def test_adjoint(self) -> None:
        """Currying on B, B, B is a bijection."""
        data = self.report(
            "morphism", "adjoint", "--m1", "builtin:B", "--m2", "builtin:B", "--m3", "builtin:B",
        )
        assert data["exit_code"] == 0
        assert data["verdicts"][0]["check"] == "adjoint_wmor"

    def test_repro(self) -> None:
        """A reproduction case passes."""
        data = self.report("repro", "krasner")
        assert data["exit_code"] == 0
        assert data["output"]["one_plus_one"] == "{0,1}"

    def test_toml_format(self) -> None:
        """--format toml renders a TOML report."""
        result = self.invoke("--format", "toml", "repro", "nar1")
        assert result.exit_code == 0
        assert tomllib.loads(result.stdout)["status"] == "pass"

    def test_bad_format(self) -> None:
        """An unknown output format is an input error."""
        assert self.invoke("--format", "yaml", "repro", "nar1").exit_code == 3

    def test_emit(self) -> None:
        """emit prints the canonical form; a bad URI exits 3."""
        result = self.invoke("emit", "builtin:F3")
        assert result.exit_code == 0
        assert result.stdout == emit(resolve_builtin("builtin:F3"))
        assert self.invoke("emit", "builtin:nope").exit_code == 3
