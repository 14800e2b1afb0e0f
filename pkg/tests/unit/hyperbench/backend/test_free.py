"""Unit tests for free normal forms of tensor products."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hyperbench.backend.errors import StructureError
from hyperbench.backend.fields import galois_field
from hyperbench.backend.free import (
    codec_partition_matches,
    free_normal_form,
    free_semialgebra_product,
    structure_constants,
)
from hyperbench.backend.module import boolean_module, free_module
from hyperbench.backend.pair import Pair
from hyperbench.backend.tensor import build_tensor

F3 = galois_field(3).to_module()
F3_SQUARED, F3_BASE = free_module(F3, 2)


class TestFreeCodec:
    """GF(3) tensored with GF(3)^2."""

    @pytest.fixture(autouse=True)  # type: ignore
    def setup(self) -> None:
        """Codec over the standard base."""
        self.f3 = galois_field(3).to_module()
        self.m2, self.base = free_module(self.f3, 2)
        self.codec = free_normal_form(self.f3, self.m2, self.base)

    def test_shape(self) -> None:
        """Rank 2 gives nine vectors."""
        assert self.codec.rank == 2
        assert self.codec.size == 9
        assert self.codec.base == (3, 1)

    def test_vectors(self) -> None:
        """Indices are mixed radix, first coordinate most significant."""
        assert self.codec.vector_index((1, 2)) == 5
        assert self.codec.vector(5) == (1, 2)

    def test_simple(self) -> None:
        """2 (x) (1,2) has coordinates (2, 1)."""
        assert self.codec.simple(2, self.m2.index("(1,2)")) == (2, 1)

    def test_encode_decode(self) -> None:
        """1 (x) e1 + 1 (x) e2 is the vector (1, 1)."""
        index = self.codec.encode([(1, 3), (1, 1)])
        assert index == 4
        assert self.codec.decode(index) == [(1, 3), (1, 1)]

    def test_encode_empty(self) -> None:
        """The empty sum has no vector."""
        with pytest.raises(StructureError):
            self.codec.encode([])

    def test_as_pair(self) -> None:
        """A vector is in A0 when both coordinates are."""
        p1 = Pair(self.f3, frozenset({0}), one=1)
        pair = self.codec.as_pair(p1)
        assert pair.zero_set == frozenset({0})
        assert pair.one == self.codec.vector_index((1, 0))
        assert pair.relation.is_equality()

    def test_not_free(self) -> None:
        """One vector is not a base of GF(3)^2."""
        with pytest.raises(StructureError):
            free_normal_form(self.f3, self.m2, self.base[:1])

    def test_monoid_mismatch(self) -> None:
        """The left factor must act on the right by the same monoid."""
        with pytest.raises(StructureError):
            free_normal_form(boolean_module(), self.m2, self.base)


class TestCodecBijection:
    """Normal forms are unique."""

    @given(index=st.integers(min_value=0, max_value=8))
    def test_decode_then_encode(self, index: int) -> None:
        """Every vector is the encoding of its own normal form."""
        codec = free_normal_form(F3, F3_SQUARED, F3_BASE)
        assert codec.vector_index(codec.vector(index)) == index
        assert codec.encode(codec.decode(index)) == index


class TestCodecAgainstClosure:
    """The codec and the congruence closure agree on GF(3) (x) GF(3)."""

    def test_partition(self) -> None:
        """Three classes, each one vector."""
        f3 = galois_field(3).to_module()
        codec = free_normal_form(f3, f3, (1,))
        closure = build_tensor(f3, f3, bound=3)
        report = codec_partition_matches(codec, closure)
        assert report.ok
        assert report.facts == {"classes": 3, "vectors_reached": 3}


class TestStructureConstants:
    """Multiplication through structure constants."""

    def test_rank_one(self) -> None:
        """Over the base {1} the product of GF(3) is its own constants."""
        field = galois_field(3)
        f3 = field.to_module()
        constants = structure_constants(f3, (1,), field.mul)
        assert constants.tolist() == [[[1]]]
        codec = free_normal_form(f3, f3, (1,))
        table = free_semialgebra_product(codec, field.mul, constants)
        assert np.array_equal(table, field.mul)
