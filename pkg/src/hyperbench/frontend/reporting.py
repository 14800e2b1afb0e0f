"""Verdicts, exit codes and the JSON/TOML report every command prints."""

import json
import time
from collections.abc import Callable, Iterator, Mapping, Sequence
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any

import tomli_w

from hyperbench.backend.errors import CapExceededError, UndeterminedError
from hyperbench.backend.report import ReportOfViolations
from hyperbench.utils.helper import Structure, content_hash
from hyperbench.utils.logger import get_logger

logger = get_logger()

EXIT_CODES = {"pass": 0, "fail": 1, "undetermined": 2, "error": 3, "cap": 4}
# Most severe first; a report exits with the code of its worst verdict.
SEVERITY = ("error", "cap", "undetermined", "fail", "pass")


@dataclass(frozen=True)
class Verdict:
    """Outcome of one check.

    Attributes:
      check: Name of the check.
      status: A key of ``EXIT_CODES``.
      witnesses: Violations as dictionaries, for ``fail``.
      facts: Informational values.
      bound: The bound a closure stopped at, for ``undetermined``.
      message: Human-readable reason, for ``cap`` and ``error``.
    """

    check: str
    status: str
    witnesses: tuple[dict[str, Any], ...] = ()
    facts: Mapping[str, Any] = field(default_factory=dict)
    bound: int | None = None
    message: str | None = None

    def to_dict(self) -> dict[str, Any]:
        """Return a JSON-ready mapping without empty fields."""
        out: dict[str, Any] = {"check": self.check, "verdict": self.status}
        if self.witnesses:
            out["witnesses"] = list(self.witnesses)
        if self.facts:
            out["facts"] = dict(self.facts)
        if self.bound is not None:
            out["bound"] = self.bound
        if self.message is not None:
            out["message"] = self.message
        return out


def verdict_of(check: str, report: ReportOfViolations) -> Verdict:
    """``pass`` when the report has no violations, ``fail`` with its witnesses otherwise."""
    data = report.to_dict()
    status = "pass" if report.ok else "fail"
    return Verdict(check, status, tuple(data["violations"]), data["facts"])


def guarded(check: str, run: Callable[[], ReportOfViolations]) -> Verdict:
    """Run a check, turning bound and cap exhaustion into verdicts."""
    try:
        return verdict_of(check, run())
    except UndeterminedError as e:
        logger.warning(f"{check}: {e}")
        return Verdict(check, "undetermined", bound=e.bound, message=str(e))
    except CapExceededError as e:
        logger.warning(f"{check}: {e}")
        facts = {"limit": e.limit, "required": e.required}
        return Verdict(check, "cap", facts=facts, message=str(e))


@dataclass
class Report:
    """Everything a command prints.

    Attributes:
      command: The command line, without the program name.
      settings: Settings echoed for reproducibility.
      verdicts: One verdict per check, in run order.
      hashes: Content hash of each input structure, by source.
      output: Command-specific payload (class tables, counts, witnesses).
      elapsed: Wall-clock seconds.
    """

    command: list[str]
    settings: dict[str, Any] = field(default_factory=dict)
    verdicts: list[Verdict] = field(default_factory=list)
    hashes: dict[str, str] = field(default_factory=dict)
    output: dict[str, Any] = field(default_factory=dict)
    elapsed: float = 0.0

    def add(self, verdict: Verdict) -> Verdict:
        """Append a verdict and return it."""
        self.verdicts.append(verdict)
        logger.info(f"{verdict.check}: {verdict.status}")
        return verdict

    def fingerprint(self, structure: Structure) -> None:
        """Record the content hash of an input structure."""
        self.hashes[structure.source] = content_hash(structure)

    @property
    def status(self) -> str:
        """The most severe verdict, ``pass`` when there is none."""
        seen = {v.status for v in self.verdicts}
        return next((s for s in SEVERITY if s in seen), "pass")

    @property
    def exit_code(self) -> int:
        """Exit code of the most severe verdict."""
        return EXIT_CODES[self.status]

    @contextmanager
    def timed(self) -> Iterator[None]:
        """Measure the wall-clock time of the enclosed block."""
        start = time.perf_counter()
        try:
            yield
        finally:
            self.elapsed = time.perf_counter() - start

    def to_dict(self) -> dict[str, Any]:
        """Return a JSON-ready mapping."""
        return {
            "command": self.command,
            "status": self.status,
            "settings": self.settings,
            "inputs": self.hashes,
            "verdicts": [v.to_dict() for v in self.verdicts],
            "output": self.output,
            "elapsed_s": round(self.elapsed, 6),
        }

    def render(self, fmt: str = "json") -> str:
        """The report as JSON, or as TOML with ``null`` values dropped."""
        data = self.to_dict()
        if fmt == "toml":
            return tomli_w.dumps(_drop_none(data))
        return json.dumps(data, indent=2, ensure_ascii=False, default=str) + "\n"


def _drop_none(value: Any) -> Any:  # noqa: ANN401
    if isinstance(value, Mapping):
        return {str(k): _drop_none(v) for k, v in value.items() if v is not None}
    if isinstance(value, Sequence) and not isinstance(value, str):
        return [_drop_none(v) for v in value if v is not None]
    return value
