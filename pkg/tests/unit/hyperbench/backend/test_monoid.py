"""Unit tests for finite monoids."""

import numpy as np
import pytest

from hyperbench.backend.errors import StructureError
from hyperbench.backend.fields import galois_field
from hyperbench.backend.monoid import (
    FiniteMonoid,
    check_monoid,
    cyclic_group,
    monoid_from_rows,
    product_monoid,
    trivial_monoid,
)


class TestFiniteMonoid:
    """Construction, lookups and the axiom check."""

    @pytest.fixture(autouse=True)  # type: ignore
    def setup(self) -> None:
        """Multiplicative monoid of GF(3): unit 1, absorbing 0."""
        self.f3 = galois_field(3).multiplicative_monoid()

    def test_check_passes_on_field_monoid(self) -> None:
        """GF(3)* with zero adjoined is a commutative monoid."""
        report = check_monoid(self.f3)
        assert report.ok
        assert report.facts["commutative"] is True
        assert report.facts["order"] == 3

    def test_units_and_subgroups(self) -> None:
        """Only the nonzero elements are units; {0, 1} is not a group."""
        assert self.f3.units() == [1, 2]
        assert self.f3.is_subgroup([1, 2])
        assert self.f3.is_subgroup([1])
        assert not self.f3.is_subgroup([0, 1])
        assert not self.f3.is_subgroup([2])

    def test_non_absorbing(self) -> None:
        """The absorbing element is skipped."""
        assert self.f3.non_absorbing() == [1, 2]
        assert cyclic_group(3).non_absorbing() == [0, 1, 2]

    def test_index_and_mul(self) -> None:
        """Labels resolve to indices and mul reads the table."""
        assert self.f3.index("2") == 2
        assert self.f3.mul(2, 2) == 1
        with pytest.raises(StructureError):
            self.f3.index("7")

    def test_identity_violation_witness(self) -> None:
        """A constant table fails the left identity law at element 0."""
        m = monoid_from_rows(("a", "b"), [[1, 1], [1, 1]], identity=0)
        report = check_monoid(m)
        v = report.violation("left_identity")
        assert v is not None
        assert v.witness == (0,)
        assert v.count == 1
        assert report.violation("associativity") is None

    def test_associativity_violation(self) -> None:
        """Left projection with an identity forced in is not associative."""
        # e is the identity, x*y = x otherwise except x*x = y
        m = monoid_from_rows(("e", "x", "y"), [[0, 1, 2], [1, 2, 1], [2, 2, 2]])
        report = check_monoid(m)
        assert "associativity" in report.axioms

    def test_absorbing_violation(self) -> None:
        """An absorbing element that is not absorbing is reported."""
        m = monoid_from_rows(("1", "z"), [[0, 1], [1, 0]], identity=0, absorbing=1)
        report = check_monoid(m)
        assert "left_absorbing" in report.axioms
        assert "right_absorbing" in report.axioms

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"labels": (), "op": np.zeros((0, 0))},
            {"labels": ("a",), "op": [[1]]},
            {"labels": ("a", "b"), "op": [[0, 1]]},
            {"labels": ("a",), "op": [[0]], "identity": 3},
        ],
    )
    def test_bad_tables_raise(self, kwargs: dict[str, object]) -> None:
        """Empty carriers, out-of-range entries, bad shapes and indices are input errors."""
        with pytest.raises(StructureError):
            FiniteMonoid(**kwargs)  # type: ignore[arg-type]

    def test_tables_are_read_only(self) -> None:
        """Validated tables cannot be mutated in place."""
        with pytest.raises(ValueError):
            self.f3.op[0, 0] = 1


class TestMonoidBuilders:
    """The small builtin monoids."""

    def test_trivial(self) -> None:
        """One element, itself the identity."""
        t = trivial_monoid()
        assert t.order == 1
        assert check_monoid(t).ok

    @pytest.mark.parametrize("n", [1, 2, 5])
    def test_cyclic_group(self, n: int) -> None:
        """Z/n is a commutative monoid where every element is a unit."""
        g = cyclic_group(n)
        assert check_monoid(g).ok
        assert g.units() == list(range(n))
        assert g.is_subgroup(range(n))

    def test_product(self) -> None:
        """The product of Z/2 and Z/3 is a commutative monoid of order 6."""
        p = product_monoid(cyclic_group(2), cyclic_group(3))
        assert p.order == 6
        assert p.labels[4] == "(1,1)"
        report = check_monoid(p)
        assert report.ok
        assert report.facts["commutative"] is True
        # (1,1) * (1,2) = (0,0)
        assert p.mul(4, 5) == 0
