"""Unit tests for maps between tensor products."""

import numpy as np
import pytest

from hyperbench.backend.builtins import krasner
from hyperbench.backend.errors import CapExceededError, StructureError
from hyperbench.backend.module import boolean_module, boolean_semiring_module, cyclic_module
from hyperbench.backend.monoid import cyclic_group, trivial_monoid
from hyperbench.backend.morphism import classify
from hyperbench.backend.pair import Pair
from hyperbench.backend.tensor import build_tensor
from hyperbench.backend.tensor_maps import (
    check_assoc_comm_dist,
    check_saturation_stable,
    class_pair,
    extension_of_homs,
    monoid_tensor,
    monoid_tensor_action,
    subset_distributivity,
    swap,
    tensor_extension,
    tensor_of_homs,
    unit_iso,
)


class TestCanonicalIsomorphisms:
    """Unit, swap, distributivity and associativity on the boolean semiring."""

    @pytest.fixture(autouse=True)  # type: ignore
    def setup(self) -> None:
        """Bsr and its square."""
        self.bsr = boolean_semiring_module()
        self.closure = build_tensor(self.bsr, self.bsr)

    def test_all_hold(self) -> None:
        """Every canonical map is an additive bijection."""
        report = check_assoc_comm_dist(self.bsr)
        assert report.ok
        for name in ("unit", "swap", "distributivity", "associativity"):
            assert report.facts[name] is True

    def test_unit(self) -> None:
        """Bsr (x) Bsr -> Bsr sends 1⊗1 to 1."""
        iso = unit_iso(self.bsr, self.bsr)
        assert iso.ok
        assert iso.table.tolist() == [0, 1]

    def test_unit_needs_regular(self) -> None:
        """B is not the regular module of Bsr's monoid."""
        with pytest.raises(StructureError):
            unit_iso(boolean_module(), self.bsr)

    def test_swap_mismatch(self) -> None:
        """Swap needs the tensor of the swapped factors."""
        z3 = cyclic_module(3)
        with pytest.raises(StructureError):
            swap(self.closure, build_tensor(z3, z3, bound=2))

    def test_tensor_of_homs(self) -> None:
        """The identity tensored with itself is the identity on classes."""
        p = Pair(self.bsr, frozenset({0}), one=1)
        f = classify([0, 1], p, p)
        result = tensor_of_homs(f, f, self.closure, self.closure)
        assert result.table.tolist() == [0, 1]
        assert result.has("homomorphism")

    def test_tensor_of_non_homs(self) -> None:
        """Factors must be homomorphisms."""
        p = Pair(self.bsr, frozenset({0}), one=1)
        f = classify([1, 1], p, p)
        with pytest.raises(StructureError):
            tensor_of_homs(f, f, self.closure, self.closure)

    def test_class_pair(self) -> None:
        """The zero class is the zero set."""
        assert class_pair(self.closure).zero_set == frozenset({0})


class TestSaturation:
    """Closures at consecutive bounds."""

    def test_stable(self) -> None:
        """B (x) B keeps its five classes from L=3 to L=4."""
        b = boolean_module()
        report = check_saturation_stable(b, b, bound=3)
        assert report.ok
        assert report.facts["saturated"] is True

    def test_unsaturated_low_bound(self) -> None:
        """At L=2 the closure is not saturated but nothing splits."""
        b = boolean_module()
        report = check_saturation_stable(b, b, bound=2)
        assert report.facts["saturated"] is False
        assert report.violation("split_classes") is None


class TestMonoidTensor:
    """Tensors of monoids and their actions."""

    @pytest.fixture(autouse=True)  # type: ignore
    def setup(self) -> None:
        """Bsr's monoid over itself."""
        self.t = boolean_semiring_module().monoid
        self.mt = monoid_tensor(self.t, self.t, self.t, [0, 1], [0, 1])

    def test_classes(self) -> None:
        """Sliding 0 leaves two classes."""
        assert self.mt.order == 2
        assert self.mt.projection.tolist() == [0, 0, 0, 1]
        assert self.mt.monoid is not None
        assert self.mt.monoid.labels == ("0⊗0", "1⊗1")
        assert self.mt.monoid.identity == 1
        assert self.mt.class_of(1, 1) == 1

    def test_bad_embedding(self) -> None:
        """Embeddings must cover T."""
        with pytest.raises(StructureError):
            monoid_tensor(self.t, self.t, self.t, [0], [0, 1])

    def test_action(self) -> None:
        """The monoid tensor acts on Bsr (x) Bsr."""
        bsr = boolean_semiring_module()
        table, report = monoid_tensor_action(self.mt, build_tensor(bsr, bsr))
        assert report.ok
        assert table.tolist() == [[0, 0], [0, 1]]


class TestTensorExtension:
    """Extensions of scalars."""

    def test_trivial_into_c2(self) -> None:
        """B extended from the trivial monoid to C2 is a C2-module."""
        c2 = cyclic_group(2)
        closure = tensor_extension(c2, [c2.identity], boolean_module())
        assert closure.saturated
        module = closure.as_module()
        assert module.monoid.order == 2
        assert not np.array_equal(module.action[0], module.action[1])

    def test_admissible_needs_one(self) -> None:
        """The admissible variant needs a unit element."""
        with pytest.raises(StructureError):
            tensor_extension(cyclic_group(2), [0], boolean_module(), admissible=True)

    def test_bad_embedding(self) -> None:
        """The embedding must be a monoid map."""
        with pytest.raises(StructureError):
            tensor_extension(trivial_monoid(), [0, 0], boolean_semiring_module())

    def test_extension_of_identities(self) -> None:
        """Identity maps induce the identity on the extension."""
        c2 = cyclic_group(2)
        closure = tensor_extension(c2, [c2.identity], boolean_module())
        b = Pair(boolean_module(), frozenset({0}))
        f2 = classify([0, 1], b, b)
        table, report = extension_of_homs([0, 1], f2, closure, closure)
        assert report.ok
        np.testing.assert_array_equal(table, np.arange(closure.order))

    def test_extension_of_homs_needs_extensions(self) -> None:
        """Plain tensors are not extensions."""
        b = Pair(boolean_module(), frozenset({0}))
        closure = build_tensor(boolean_module(), boolean_module(), bound=3)
        with pytest.raises(StructureError):
            extension_of_homs([0], classify([0, 1], b, b), closure, closure)


class TestSubsetDistributivity:
    """Power-set tensors."""

    def test_triple_cap(self) -> None:
        """64 triples exceed a cap of 10."""
        with pytest.raises(CapExceededError) as info:
            subset_distributivity(krasner(), krasner(), cap=10)
        assert info.value.required == 64
