"""Unit tests for map classification and map modules."""

import numpy as np
import pytest

from hyperbench.backend.errors import CapExceededError, StructureError
from hyperbench.backend.module import boolean_module, boolean_semiring_module
from hyperbench.backend.morphism import (
    FLAGS,
    additive_graph_closure,
    as_map,
    classify,
    classify_all,
    enumerate_multiplicative,
    flag_counts,
    hom_bimagma,
    morphism_frame,
    paired_pullback,
    wmor_pair,
)
from hyperbench.backend.pair import Pair, equality
from hyperbench.utils.helper import resolve_builtin


class TestClassify:
    """Flags of single maps on the boolean semiring pair."""

    @pytest.fixture(autouse=True)  # type: ignore
    def setup(self) -> None:
        """Bsr with A0 = {0}."""
        self.bsr = boolean_semiring_module()
        self.pair = Pair(self.bsr, frozenset({0}), one=1)

    @pytest.mark.parametrize("table", [[0, 1], [0, 0]])
    def test_all_flags(self, table: list[int]) -> None:
        """The identity and the zero map carry every flag."""
        result = classify(table, self.pair, self.pair)
        assert result.flags == frozenset(FLAGS)
        assert result.report.ok

    def test_not_multiplicative(self) -> None:
        """A map moving zero is only monotone."""
        result = classify([1, 1], self.pair, self.pair)
        assert result.flags == frozenset({"monotone"})
        assert result.report.violation("multiplicative") is not None

    def test_to_dict(self) -> None:
        """The map is keyed by source labels."""
        d = classify([0, 1], self.pair, self.pair).to_dict()
        assert d["map"] == {"0": "0", "1": "1"}
        assert d["flags"]["weak"] is True

    def test_bad_table(self) -> None:
        """Tables must be total maps into the target."""
        with pytest.raises(StructureError):
            as_map([0, 2], self.bsr, self.bsr)
        with pytest.raises(StructureError):
            classify([0], self.pair, self.pair)

    def test_unpaired_identity(self) -> None:
        """Moving 1 out of A0 drops every pair-morphism flag, not only weak."""
        wide = Pair(self.bsr, frozenset({0, 1}), one=1)
        result = classify([0, 1], wide, self.pair)
        assert result.flags == frozenset({"monotone", "multiplicative"})
        assert result.report.violation("paired") is not None

    def test_into_larger_zero_set(self) -> None:
        """The identity into A0 = {0, 1} keeps every flag."""
        wide = Pair(self.bsr, frozenset({0, 1}), one=1)
        assert classify([0, 1], self.pair, wide).flags == frozenset(FLAGS)

    def test_graph_closure(self) -> None:
        """The identity reaches only the diagonal."""
        reach = additive_graph_closure(np.arange(2), self.bsr, self.bsr)
        assert reach.tolist() == [[True, False], [False, True]]


class TestEnumeration:
    """Multiplicative maps and the structures they form."""

    @pytest.fixture(autouse=True)  # type: ignore
    def setup(self) -> None:
        """Bsr with A0 = {0}."""
        self.bsr = boolean_semiring_module()
        self.pair = Pair(self.bsr, frozenset({0}), one=1)

    def test_enumerate(self) -> None:
        """Bsr has the zero map and the identity."""
        maps = enumerate_multiplicative(self.bsr, self.bsr)
        assert [f.tolist() for f in maps] == [[0, 0], [0, 1]]

    def test_cap(self) -> None:
        """Two candidates exceed a cap of one."""
        with pytest.raises(CapExceededError):
            enumerate_multiplicative(self.bsr, self.bsr, cap=1)

    def test_monoid_mismatch(self) -> None:
        """Modules over different monoids have no multiplicative maps."""
        with pytest.raises(StructureError):
            enumerate_multiplicative(boolean_module(), self.bsr)

    def test_flag_counts(self) -> None:
        """Both maps carry every flag."""
        results = classify_all(self.pair, self.pair)
        assert flag_counts(results) == {flag: 2 for flag in FLAGS}
        frame = morphism_frame(results)
        assert frame.height == 2
        assert frame["map"].to_list() == [["0", "0"], ["0", "1"]]

    def test_flag_counts_empty(self) -> None:
        """No maps give zero counts."""
        assert flag_counts([]) == {flag: 0 for flag in FLAGS}

    def test_hom_bimagma(self) -> None:
        """The homomorphisms form a copy of Bsr."""
        result = hom_bimagma(self.bsr, self.bsr)
        assert result.module is not None
        assert result.report.ok
        assert result.module.add.tolist() == [[0, 1], [1, 1]]
        assert result.index_of([0, 1]) == 1
        with pytest.raises(StructureError):
            result.index_of([1, 1])

    def test_wmor_pair(self) -> None:
        """Two weak morphisms; only the zero map lands in A0."""
        result = wmor_pair(self.pair, self.pair)
        assert result.pair is not None
        assert len(result.maps) == 2
        assert result.pair.zero_set == frozenset({0})


class TestPullback:
    """Pairs pulled back along maps."""

    @pytest.fixture(autouse=True)  # type: ignore
    def setup(self) -> None:
        """Bsr with A0 = {0}."""
        self.bsr = boolean_semiring_module()
        self.pair = Pair(self.bsr, frozenset({0}), one=1)

    def test_identity(self) -> None:
        """Pulling back along the identity recovers the pair."""
        result = paired_pullback([0, 1], self.bsr, self.pair)
        assert result.pair.zero_set == frozenset({0})
        assert result.image_pair.zero_set == frozenset({0})
        assert result.morphism.has("weak")
        assert result.report.facts["injective"] is True

    def test_zero_map(self) -> None:
        """The zero map pulls back the whole carrier and forgets the relation."""
        result = paired_pullback([0, 0], self.bsr, self.pair)
        assert result.pair.zero_set == frozenset({0, 1})
        assert result.pair.surpassing is None
        assert result.report.facts["injective"] is False

    def test_not_multiplicative(self) -> None:
        """Only multiplicative maps pull back."""
        with pytest.raises(StructureError):
            paired_pullback([1, 1], self.bsr, self.pair)


class TestFlagChain:
    """Homomorphisms are colax and colax maps are weak on every fixture."""

    @pytest.mark.parametrize(
        "uri",
        [
            "builtin:B",
            "builtin:Bsr",
            "builtin:Z3",
            "builtin:F3",
            "builtin:F4",
            "builtin:sign",
            "builtin:krasner",
        ],
    )
    def test_chain(self, uri: str) -> None:
        """hom ⊆ colax ⊆ weak and hom ⊆ lax for all zero-set combinations."""
        base = resolve_builtin(uri).require_pair()
        m = base.module
        zero_sets = {frozenset({m.zero}), base.zero_set, frozenset(range(m.order))}
        pairs = [
            Pair(m, zs, one=base.one).with_relation(equality(m.order)) for zs in zero_sets
        ]
        for source in pairs:
            for target in pairs:
                results = classify_all(source, target)
                with_flag = {
                    flag: {r.table.tobytes() for r in results if r.has(flag)} for flag in FLAGS
                }
                assert with_flag["homomorphism"] <= with_flag["colax"]
                assert with_flag["homomorphism"] <= with_flag["lax"]
                assert with_flag["colax"] <= with_flag["weak"]
                assert with_flag["weak"] <= with_flag["paired"]
