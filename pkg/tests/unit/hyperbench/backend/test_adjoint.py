"""Unit tests for currying between product, tensor and map modules."""

import pytest

from hyperbench.backend.adjoint import (
    adjoint_canonical,
    adjoint_section,
    adjoint_wmor,
    inner_maps,
)
from hyperbench.backend.builtins import krasner
from hyperbench.backend.errors import StructureError
from hyperbench.backend.fields import galois_field
from hyperbench.backend.hyperpair import build_hyperpair, powerset_pair
from hyperbench.backend.module import (
    boolean_module,
    boolean_semiring_module,
    cyclic_module,
    free_module,
)
from hyperbench.backend.pair import Pair
from hyperbench.backend.tensor import build_tensor


class TestWeakColax:
    """Product maps against nested weak colax maps on B."""

    @pytest.fixture(autouse=True)  # type: ignore
    def setup(self) -> None:
        """B with A0 = {0}."""
        self.pair = Pair(boolean_module(), frozenset({0}))

    def test_inner(self) -> None:
        """The zero map and the identity, the zero map in A0."""
        inner = inner_maps(self.pair, self.pair)
        assert inner.pair is not None
        assert len(inner.maps.maps) == 2
        assert inner.pair.zero_set == frozenset({0})
        assert inner.index_of(inner.maps.maps[1]) == 1

    def test_bijection(self) -> None:
        """Two maps on each side, currying is a bijection."""
        result = adjoint_wmor(self.pair, self.pair, self.pair)
        assert result.report.ok
        assert (result.left, result.right, result.inner) == (2, 2, 2)
        assert result.to_dict()["report"]["ok"] is True


class TestSection:
    """Base-supported maps over GF(3)."""

    @pytest.fixture(autouse=True)  # type: ignore
    def setup(self) -> None:
        """GF(3) with A0 = {0}."""
        self.f3 = galois_field(3).to_module()
        self.p3 = Pair(self.f3, frozenset({0}), one=1)

    def test_rank_one(self) -> None:
        """Each of the three inner maps gives a section."""
        result = adjoint_section(self.p3, Pair(self.f3, frozenset({0})), self.p3, (1,))
        assert result.report.ok
        assert result.report.facts["sections"] == 3
        assert result.inner == 3

    def test_rank_two(self) -> None:
        """Only the zero map is supported on the two base rays."""
        m2, base = free_module(self.f3, 2)
        result = adjoint_section(self.p3, Pair(m2, frozenset({0})), self.p3, base)
        assert result.report.facts["sections"] == 1

    def test_not_free(self) -> None:
        """A single vector does not span GF(3)^2."""
        m2, base = free_module(self.f3, 2)
        with pytest.raises(StructureError):
            adjoint_section(self.p3, Pair(m2, frozenset({0})), self.p3, base[:1])


class TestCanonical:
    """Meet uncurrying into the power set of Krasner."""

    @pytest.fixture(autouse=True)  # type: ignore
    def setup(self) -> None:
        """Bsr (x) Bsr with A0 = {0} on both factors."""
        self.bsr = boolean_semiring_module()
        self.pair = Pair(self.bsr, frozenset({0}), one=1)
        self.closure = build_tensor(self.bsr, self.bsr)

    def test_inverse(self) -> None:
        """Three colax maps on each side and the two directions are inverse."""
        result = adjoint_canonical(self.pair, self.pair, powerset_pair(krasner()), self.closure)
        assert result.report.facts["phi"] == 3
        assert result.report.facts["psi"] == 3
        assert result.report.facts["inverse"] is True
        assert result.report.violation("psi_colax") is None
        assert (result.left, result.right, result.inner) == (3, 3, 3)

    def test_family_not_closed(self) -> None:
        """The Krasner hyperpair is not closed under intersection."""
        with pytest.raises(StructureError):
            adjoint_canonical(self.pair, self.pair, build_hyperpair(krasner()), self.closure)

    def test_closure_mismatch(self) -> None:
        """The closure must be on the given modules."""
        z3 = cyclic_module(3)
        closure = build_tensor(z3, z3, bound=2)
        with pytest.raises(StructureError):
            adjoint_canonical(self.pair, self.pair, powerset_pair(krasner()), closure)
