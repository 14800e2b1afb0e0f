"""Violation reports returned by every ``check_*`` operation.

A report lists each violated axiom once, with the first witness in
lexicographic order and the total number of witnesses. Informational results
(properness, derived lemmas, counts) are kept apart in ``facts``.
"""

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from hyperbench.utils.logger import get_logger

logger = get_logger()

Witness = tuple[Any, ...]


@dataclass(frozen=True)
class Violation:
    """One violated axiom.

    Attributes:
      axiom: Short axiom identifier, e.g. ``"associativity"``.
      witness: First counterexample found, as element indices.
      count: Number of counterexamples.
    """

    axiom: str
    witness: Witness
    count: int = 1

    def to_dict(self) -> dict[str, Any]:
        """Return a JSON-ready mapping."""
        return {"axiom": self.axiom, "witness": list(self.witness), "count": self.count}


@dataclass(frozen=True)
class ReportOfViolations:
    """Outcome of an exhaustive check."""

    subject: str
    violations: tuple[Violation, ...] = ()
    facts: Mapping[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        """Whether no axiom was violated."""
        return not self.violations

    @property
    def axioms(self) -> tuple[str, ...]:
        """Identifiers of the violated axioms in report order."""
        return tuple(v.axiom for v in self.violations)

    def violation(self, axiom: str) -> Violation | None:
        """Return the violation recorded for ``axiom``, if any."""
        for v in self.violations:
            if v.axiom == axiom:
                return v
        return None

    def merged(self, *others: "ReportOfViolations") -> "ReportOfViolations":
        """Combine this report with others under this report's subject.

        Args:
          *others: Reports to append; their facts are prefixed by their subject.

        Returns:
          A new report containing every violation and fact.
        """
        violations = list(self.violations)
        facts = dict(self.facts)
        for other in others:
            violations.extend(other.violations)
            facts.update({f"{other.subject}.{k}": v for k, v in other.facts.items()})
        return ReportOfViolations(self.subject, tuple(violations), facts)

    def to_dict(self) -> dict[str, Any]:
        """Return a JSON-ready mapping."""
        return {
            "subject": self.subject,
            "ok": self.ok,
            "violations": [v.to_dict() for v in self.violations],
            "facts": {k: _jsonable(v) for k, v in self.facts.items()},
        }


def _jsonable(value: Any) -> Any:  # noqa: ANN401
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, (frozenset, set, tuple, list)):
        items = [_jsonable(v) for v in value]
        return sorted(items) if isinstance(value, (set, frozenset)) else items
    if isinstance(value, Mapping):
        return {str(k): _jsonable(v) for k, v in value.items()}
    return value


class ViolationCollector:
    """Mutable builder for a :class:`ReportOfViolations`.

    Witnesses of an axiom are counted; only the first one is kept.
    """

    def __init__(self, subject: str) -> None:
        """Start an empty report about ``subject``."""
        self.subject = subject
        self._order: list[str] = []
        self._first: dict[str, Witness] = {}
        self._count: dict[str, int] = {}
        self.facts: dict[str, Any] = {}

    def add(self, axiom: str, witness: Iterable[Any], count: int = 1) -> None:
        """Record ``count`` counterexamples of ``axiom``.

        Args:
          axiom: Axiom identifier.
          witness: Counterexample, kept only if it is the first for the axiom.
          count: How many counterexamples this call accounts for.
        """
        if count <= 0:
            return
        if axiom not in self._first:
            self._order.append(axiom)
            self._first[axiom] = tuple(_jsonable(w) for w in witness)
            self._count[axiom] = 0
        self._count[axiom] += count

    def add_mask(self, axiom: str, bad: np.ndarray) -> None:
        """Record every ``True`` cell of a boolean array as a counterexample.

        Args:
          axiom: Axiom identifier.
          bad: Boolean array whose ``True`` cells are failures; the first one in
            C order becomes the witness.
        """
        hits = np.argwhere(bad)
        if len(hits):
            self.add(axiom, (int(i) for i in hits[0]), int(len(hits)))

    def fact(self, key: str, value: Any) -> None:  # noqa: ANN401
        """Attach an informational fact."""
        self.facts[key] = value

    @property
    def ok(self) -> bool:
        """Whether nothing has been recorded yet."""
        return not self._order

    def build(self) -> ReportOfViolations:
        """Freeze the collected data into a report."""
        violations = tuple(
            Violation(a, self._first[a], self._count[a]) for a in self._order
        )
        if violations:
            logger.debug(
                f"{self.subject}: {len(violations)} axiom(s) violated: "
                f"{', '.join(self._order)}",
            )
        return ReportOfViolations(self.subject, violations, dict(self.facts))
