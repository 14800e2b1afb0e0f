"""Unit tests for the bounded congruence closure of tensor products."""

import numpy as np
import pytest

from hyperbench.backend.errors import CapExceededError, StructureError, UndeterminedError
from hyperbench.backend.module import (
    boolean_module,
    boolean_semiring_module,
    check_module,
    cyclic_module,
)
from hyperbench.backend.monoid import trivial_monoid
from hyperbench.backend.pair import Pair
from hyperbench.backend.tensor import (
    MonoidFactor,
    TensorTerm,
    build_tensor,
    tensor_pair,
    tensor_preorder,
    term_count,
    universal_property_oracle,
)


class TestTensorTerm:
    """Formal sums of simple tensors."""

    def test_sorted(self) -> None:
        """Summands are kept sorted."""
        term = TensorTerm(((1, 0), (0, 1)))
        assert term.summands == ((0, 1), (1, 0))
        assert term.length == 2
        assert term.generators(2) == (1, 2)

    def test_empty(self) -> None:
        """The empty sum is not a term."""
        with pytest.raises(StructureError):
            TensorTerm(())

    def test_term_count(self) -> None:
        """Multisets of size 1 and 2 over two symbols."""
        assert term_count(2, 2) == 5
        assert term_count(4, 3) == 34


class TestSemiringTensor:
    """The boolean semiring tensored with itself."""

    @pytest.fixture(autouse=True)  # type: ignore
    def setup(self) -> None:
        """Closure of Bsr (x) Bsr at the default bound."""
        self.bsr = boolean_semiring_module()
        self.closure = build_tensor(self.bsr, self.bsr)

    def test_two_classes(self) -> None:
        """Sliding 0 collapses every tensor with a zero factor."""
        c = self.closure
        assert c.saturated
        assert c.order == 2
        assert c.labels == ("0⊗0", "1⊗1")
        assert c.zero_class == 0
        assert [c.simple(i, j) for i in range(2) for j in range(2)] == [0, 0, 0, 1]

    def test_addition(self) -> None:
        """The class addition is the boolean one."""
        assert self.closure.class_add is not None
        assert self.closure.class_add.tolist() == [[0, 1], [1, 1]]
        assert self.closure.add(1, 1) == 1

    def test_long_term(self) -> None:
        """Terms past the bound are folded on a saturated closure."""
        assert self.closure.class_of([3] * 6) == 1

    def test_as_module(self) -> None:
        """The classes form a module over the semiring."""
        module = self.closure.as_module()
        assert check_module(module).ok
        assert module.action.tolist() == [[0, 0], [0, 1]]

    def test_tensor_pair(self) -> None:
        """A0 = {0} on both sides gives the zero class as zero family."""
        p = Pair(self.bsr, frozenset({0}), one=1)
        pair, report = tensor_pair(p, p, self.closure)
        assert report.ok
        assert pair.zero_set == frozenset({0})
        assert pair.one == 1
        assert report.facts == {"proper": True, "zero_family_size": 1}

    def test_tensor_pair_wrong_factors(self) -> None:
        """Pairs must live on the factors."""
        p = Pair(cyclic_module(3), frozenset({0}))
        with pytest.raises(StructureError):
            tensor_pair(p, p, self.closure)

    def test_oracle(self) -> None:
        """Three balanced maps into B, matching three additive class maps."""
        report = universal_property_oracle(self.closure, [boolean_module()])
        assert report.ok
        assert report.facts["counts"] == [{"target": 0, "balanced": 3, "class_maps": 3}]
        assert report.facts["separated"] is True

    def test_preorder_defaults_to_equality(self) -> None:
        """Without relations the class pre-order is equality."""
        assert tensor_preorder(self.closure).is_equality()

    def test_to_dict(self) -> None:
        """The class table is JSON-ready."""
        d = self.closure.to_dict()
        assert d["saturated"] is True
        assert d["classes"][1]["rep"] == "1⊗1"
        assert d["add"] == [[0, 1], [1, 1]]


class TestBooleanTensor:
    """B (x) B over the trivial monoid."""

    @pytest.fixture(autouse=True)  # type: ignore
    def setup(self) -> None:
        """The boolean semilattice without an action."""
        self.b = boolean_module()

    def test_five_classes(self) -> None:
        """At L=3 the sum 0⊗1 + 1⊗0 is a class of its own."""
        c = build_tensor(self.b, self.b, bound=3)
        assert c.saturated
        assert c.order == 5
        assert c.labels[4] == "0⊗1 + 1⊗0"
        assert c.add(1, 2) == 4
        assert c.add(4, 3) == 3
        assert c.add(0, 2) == 2

    def test_oracle_separates(self) -> None:
        """Six balanced maps into B separate the five classes."""
        c = build_tensor(self.b, self.b, bound=3)
        report = universal_property_oracle(c, [self.b])
        assert report.ok
        assert report.facts["counts"][0]["balanced"] == 6
        assert report.facts["separated"] is True

    def test_oracle_not_separating(self) -> None:
        """A one-element target cannot tell the five classes apart."""
        c = build_tensor(self.b, self.b, bound=3)
        report = universal_property_oracle(c, [cyclic_module(1)])
        assert not report.ok
        v = report.violation("separated")
        assert v is not None
        assert v.count == 20
        assert report.violation("balanced_factors") is None
        assert report.facts["separated"] is False

    def test_unsaturated(self) -> None:
        """At L=2 the class of 0⊗1 + 1⊗0 reaches the bound."""
        c = build_tensor(self.b, self.b, bound=2)
        assert not c.saturated
        assert c.class_add is None
        with pytest.raises(UndeterminedError) as info:
            c.add(0, 1)
        assert info.value.bound == 2
        with pytest.raises(UndeterminedError):
            c.class_of([1, 2, 3])
        with pytest.raises(UndeterminedError):
            c.as_module()
        with pytest.raises(UndeterminedError):
            universal_property_oracle(c, [self.b])

    def test_term_beyond_bound(self) -> None:
        """Looking up a term longer than the bound is an error."""
        c = build_tensor(self.b, self.b, bound=2)
        with pytest.raises(StructureError):
            c.term_id([0, 0, 0])

    def test_bound_below_two(self) -> None:
        """L=1 is rejected."""
        with pytest.raises(StructureError):
            build_tensor(self.b, self.b, bound=1)

    def test_term_cap(self) -> None:
        """Too many terms name the largest feasible bound."""
        with pytest.raises(CapExceededError) as info:
            build_tensor(self.b, self.b, bound=4, max_terms=10)
        assert info.value.required == 69
        assert "largest feasible bound 1" in str(info.value)

    def test_monoid_mismatch(self) -> None:
        """Factors over different monoids are rejected."""
        with pytest.raises(StructureError):
            build_tensor(self.b, boolean_semiring_module())

    def test_negation_required(self) -> None:
        """B has no additive inverses, so the negation rule needs tables."""
        with pytest.raises(StructureError):
            build_tensor(self.b, self.b, bound=2, with_negation=True)

    def test_identity_negation(self) -> None:
        """The identity as negation adds no merges."""
        ident = np.arange(2)
        c = build_tensor(self.b, self.b, bound=3, with_negation=True, negations=(ident, ident))
        assert c.order == 5
        assert "negation" not in c.rules


class TestMonoidFactor:
    """Validation of monoid factors."""

    def test_bad_embedding(self) -> None:
        """The embedding must have one image per element of T."""
        t = boolean_semiring_module().monoid
        with pytest.raises(StructureError):
            MonoidFactor(trivial_monoid(), t, np.array([0, 0]))

    def test_identity_embedding(self) -> None:
        """T inside itself."""
        t = boolean_semiring_module().monoid
        factor = MonoidFactor(t, t, np.arange(2))
        assert factor.order == 2
        assert factor.zero == 1
        assert factor.negation() is None
        assert factor.ract.tolist() == t.op.T.tolist()
