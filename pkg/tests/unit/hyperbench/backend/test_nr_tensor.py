"""Unit tests for the tensor with partial hyperaddition."""

import pytest

from hyperbench.backend.builtins import krasner, tropical_chain
from hyperbench.backend.errors import CapExceededError, StructureError
from hyperbench.backend.module import boolean_module, boolean_semiring_module
from hyperbench.backend.nr_tensor import (
    check_nr_tensor,
    module_hypermagma,
    nr_add,
    nr_assoc_counterexample,
    nr_collapse_report,
    nr_sum,
    nr_tensor,
)
from hyperbench.backend.tensor import build_tensor


class TestNRTensor:
    """Krasner tensored with itself."""

    @pytest.fixture(autouse=True)  # type: ignore
    def setup(self) -> None:
        """Four simple tensors."""
        self.t = nr_tensor(krasner(), krasner())

    def test_carrier(self) -> None:
        """Labels follow the factor order."""
        assert self.t.order == 4
        assert self.t.hypermagma.labels == ("0⊗0", "0⊗1", "1⊗0", "1⊗1")
        assert self.t.factors(2) == (1, 0)

    def test_mixed_sum_empty(self) -> None:
        """Tensors differing in both factors have an empty sum."""
        assert nr_add(self.t, 1, 2) == 0
        assert self.t.render(0) == "∅"

    def test_diagonal_sum(self) -> None:
        """1⊗1 + 1⊗1 spreads along both factors."""
        assert nr_add(self.t, 3, 3) == 0b1110

    def test_empty_absorbs(self) -> None:
        """The empty set absorbs in set sums."""
        assert nr_sum(self.t, 0, 0b1000) == 0

    def test_no_mixed_sums(self) -> None:
        """The check finds no nonempty mixed sum."""
        report = check_nr_tensor(self.t)
        assert report.violation("mixed_sum_nonempty") is None

    def test_bad_index(self) -> None:
        """Indices outside the carrier are rejected."""
        with pytest.raises(StructureError):
            nr_add(self.t, 0, 4)

    def test_too_large(self) -> None:
        """36 simple tensors do not fit a hypermagma carrier."""
        with pytest.raises(CapExceededError):
            nr_tensor(tropical_chain(5), tropical_chain(5))


class TestAssociativity:
    """Two bracketings on the tropical chain."""

    def test_counterexample(self) -> None:
        """The grouped sum is {2⊗2} and the chained one is empty."""
        witness = nr_assoc_counterexample(2)
        assert witness.rendered == ("{2⊗2}", "∅")
        assert not witness.associative
        assert witness.to_dict()["v1"] == "2"

    def test_short_chain(self) -> None:
        """A chain of length 1 has no counterexample."""
        with pytest.raises(StructureError):
            nr_assoc_counterexample(1)

    def test_check_reports_associativity(self) -> None:
        """The exhaustive check finds the failure too."""
        h = tropical_chain(2)
        report = check_nr_tensor(nr_tensor(h, h))
        assert not report.ok


class TestCollapse:
    """Two-term sums against the congruence closure."""

    def test_module_hypermagma(self) -> None:
        """Sums become singletons."""
        assert module_hypermagma(boolean_module()).add.tolist() == [[1, 2], [2, 2]]

    def test_semiring_collapse(self) -> None:
        """Two mixed pairs collapse and no class is lost."""
        bsr = boolean_semiring_module()
        h = module_hypermagma(bsr)
        closure = build_tensor(bsr, bsr)
        report = nr_collapse_report(nr_tensor(h, h), closure)
        assert report.ok
        assert report.facts["pairs"] == 10
        assert len(report.facts["collapsed"]) == 2
        assert report.facts["lost_classes"] == []

    def test_carrier_mismatch(self) -> None:
        """The tensor must be over the closure's factors."""
        bsr = boolean_semiring_module()
        closure = build_tensor(bsr, bsr)
        with pytest.raises(StructureError):
            nr_collapse_report(nr_tensor(krasner(), tropical_chain(2)), closure)
