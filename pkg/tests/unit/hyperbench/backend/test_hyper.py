"""Unit tests for hypermagmas, the builtin fixtures and hyperpairs."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hyperbench.backend.builtins import (
    HYPERMAGMA_BUILTINS,
    all_sum,
    builtin,
    empty_sum,
    krasner,
    pair_sum,
    sign,
    tropical_chain,
    tropical_void,
)
from hyperbench.backend.errors import CapExceededError, StructureError
from hyperbench.backend.hyper import (
    Hypermagma,
    bits,
    check_hyperfield,
    check_hypergroup,
    check_hypersemigroup,
    hypernegatives,
    mask_label,
    negation_table,
    powerset_add,
    to_mask,
    weakly_neutral_family,
)
from hyperbench.backend.hyperpair import (
    build_hyperpair,
    is_intersection_closed,
    lift_relation,
    negation_on_family,
    powerset_pair,
    singleton_embedding,
    tangible_monoid,
)
from hyperbench.backend.module import check_module
from hyperbench.backend.pair import equality, find_property_N

SIZED = {
    "tropical_chain": 2,
    "tropical_void": 2,
    "all_sum": 3,
    "empty_sum": 3,
    "pair_sum": 3,
    "mass_a": 3,
    "mass_b": 3,
    "mass_c": 4,
    "idem": 3,
    "ordered_bipotent": 3,
}


class TestMasks:
    """Bit-mask helpers."""

    def test_masks(self) -> None:
        """Masks encode sorted index sets and render with labels."""
        assert to_mask([2, 0]) == 0b101
        assert bits(0b101) == [0, 2]
        assert bits(0) == []
        assert mask_label(("a", "b", "c"), 0b101) == "{a,c}"
        assert mask_label(("a",), 0) == "{}"


class TestHypermagma:
    """Validation and the hypersemigroup, hypergroup and hyperfield suites."""

    @pytest.mark.parametrize("h", [krasner(), sign()])
    def test_hyperfields(self, h: Hypermagma) -> None:
        """Krasner and sign are hyperfields."""
        report = check_hyperfield(h)
        assert report.ok, report.to_dict()
        assert report.facts["commutative"] is True

    def test_tropical_chain_is_hypergroup(self) -> None:
        """The two-step tropical chain is a hypergroup with a -> a."""
        report = check_hypergroup(tropical_chain(2))
        assert report.ok
        assert report.facts["negation"] == [0, 1, 2]

    def test_tropical_void(self) -> None:
        """Empty sums a + a break negatives and associativity."""
        h = tropical_void(2)
        report = check_hypergroup(h)
        assert "unique_hypernegative" in report.axioms
        assert "associativity" in report.axioms
        assert check_hypersemigroup(tropical_void(1)).facts["empty_sums"] == 1

    def test_empty_and_pair_sums(self) -> None:
        """Empty and union sums are associative but have no hypernegatives."""
        assert check_hypersemigroup(empty_sum(3)).ok
        assert check_hypersemigroup(empty_sum(3)).facts["empty_sums"] == 4
        assert check_hypersemigroup(pair_sum(3)).ok
        assert hypernegatives(pair_sum(3)) == [[0], [], []]
        assert negation_table(pair_sum(3)) is None

    def test_all_sum(self) -> None:
        """With three elements every nonzero element is a hypernegative of every other."""
        h = all_sum(3)
        assert check_hypersemigroup(h).ok
        assert hypernegatives(h)[1] == [1, 2]
        assert "unique_hypernegative" in check_hypergroup(h).axioms

    def test_hyperzero_violation(self) -> None:
        """A hyperzero with 0 + 1 = {0, 1} is reported on both sides."""
        h = Hypermagma(("0", "1"), np.array([[0b01, 0b11], [0b11, 0b10]]), 0)
        axioms = check_hypersemigroup(h).axioms
        assert "hyperzero_left" in axioms
        assert "hyperzero_right" in axioms

    def test_hyperfield_needs_mul(self) -> None:
        """Hyperfield checks need a product and a hyperzero."""
        with pytest.raises(StructureError):
            check_hyperfield(all_sum(3))
        with pytest.raises(StructureError):
            hypernegatives(Hypermagma(("a",), np.array([[1]]), None))

    def test_right_distributive(self) -> None:
        """With x.y = y on nonzero elements only (a + b)a = a + a fails."""
        add = np.array([[0b001, 0b010, 0b100], [0b010, 0b011, 0b110], [0b100, 0b110, 0b101]])
        mul = np.array([[0, 0, 0], [0, 1, 2], [0, 1, 2]])
        report = check_hyperfield(Hypermagma(("0", "a", "b"), add, 0, mul, 1))
        assert "left_distributive" not in report.axioms
        v = report.violation("right_distributive")
        assert v is not None
        assert v.witness == (1, 1, 2)
        assert report.facts["mul_commutative"] is False

    def test_missing_unit(self) -> None:
        """A product without a unit fails mul_unit."""
        h = Hypermagma(krasner().labels, krasner().add, 0, krasner().mul, None)
        assert "mul_unit" in check_hyperfield(h).axioms

    @pytest.mark.parametrize(
        ("labels", "add", "zero"),
        [
            (tuple(str(i) for i in range(31)), np.zeros((31, 31)), 0),
            (("0", "1"), np.array([[1, 4], [2, 2]]), 0),
            (("0", "1"), np.array([[1, 2], [2, 2]]), 5),
        ],
    )
    def test_bad_tables(self, labels: tuple[str, ...], add: np.ndarray, zero: int) -> None:
        """Oversized carriers, masks beyond the carrier and bad zeros are input errors."""
        with pytest.raises(StructureError):
            Hypermagma(labels, add, zero)

    def test_scale_needs_mul(self) -> None:
        """Elementwise products need a multiplication."""
        assert sign().scale(2, 0b110) == 0b110
        with pytest.raises(StructureError):
            all_sum(3).scale(1, 0b10)

    def test_weakly_neutral_family(self) -> None:
        """In Krasner, {0} and {0, 1} are weakly neutral and closed under +."""
        family = weakly_neutral_family(krasner())
        assert family.members == frozenset({0b01, 0b11})
        assert family.report.ok

    @given(
        name=st.sampled_from(sorted(SIZED)),
        s1=st.integers(min_value=0, max_value=7),
        s2=st.integers(min_value=0, max_value=7),
        extra=st.integers(min_value=0, max_value=7),
    )
    def test_powerset_add_is_monotone(self, name: str, s1: int, s2: int, extra: int) -> None:
        """Enlarging an operand never shrinks a power-set sum."""
        h = builtin(name, SIZED[name])
        full = h.full
        a, b, c = s1 & full, s2 & full, extra & full
        small = powerset_add(h, a, b)
        large = powerset_add(h, a | c, b)
        assert small & ~large == 0
        assert powerset_add(h, a, b) == powerset_add(h, b, a)
        assert powerset_add(h, 0, b) == 0


class TestBuiltins:
    """The named fixture families."""

    @pytest.mark.parametrize("name", sorted(HYPERMAGMA_BUILTINS))
    def test_every_builtin_has_hyperzero(self, name: str) -> None:
        """Every fixture is commutative with 0 as hyperzero."""
        h = builtin(name, *([SIZED[name]] if name in SIZED else []))
        report = check_hypersemigroup(h)
        assert report.facts["commutative"] is True
        assert "hyperzero_left" not in report.axioms
        assert h.zero == 0

    def test_labels(self) -> None:
        """Tropical chains are labelled from -inf."""
        assert tropical_chain(3).labels == ("-inf", "1", "2", "3")
        assert sign().labels == ("0", "1", "-1")

    @pytest.mark.parametrize(
        ("name", "params"),
        [("nope", ()), ("all_sum", ()), ("mass_c", (3,)), ("tropical_chain", (0,))],
    )
    def test_bad_requests(self, name: str, params: tuple[int, ...]) -> None:
        """Unknown names, missing parameters and small sizes are input errors."""
        with pytest.raises(StructureError):
            builtin(name, *params)


class TestHyperpair:
    """Closure of the singletons and the induced pair."""

    def test_krasner_family(self) -> None:
        """Krasner closes to {0}, {1}, {0,1} with a zero family of two."""
        hp = build_hyperpair(krasner())
        assert hp.labels == ("{0}", "{1}", "{0,1}")
        assert hp.zero_family == frozenset({0, 2})
        assert hp.report.facts["group_action"] is True
        assert hp.report.facts["has_empty_set"] is False
        assert hp.report.facts["mul_closed"] is True
        assert not is_intersection_closed(hp)
        assert check_module(hp.to_module()).ok

    def test_sign_pair_property_n(self) -> None:
        """In the sign hyperpair the pseudo-negative of 1 is -1 and e is the full set."""
        hp = build_hyperpair(sign())
        assert hp.order == 4
        (w,) = find_property_N(hp.to_pair())
        assert hp.family[w.pseudo_neg_one] == 0b100
        assert hp.family[w.e] == sign().full

    def test_negation_on_family(self) -> None:
        """Elementwise negation of the sign family is a negation map."""
        hp = build_hyperpair(sign())
        neg = negation_table(sign())
        assert neg is not None
        table, report = negation_on_family(hp, neg)
        assert table.tolist() == [0, 2, 1, 3]
        assert report.ok

    def test_singleton_embedding(self) -> None:
        """Singletons come first in family order."""
        hp = build_hyperpair(sign())
        assert singleton_embedding(hp).tolist() == [0, 1, 2]
        with pytest.raises(StructureError):
            hp.index_of(0b011)

    def test_empty_set_member(self) -> None:
        """Empty sums put the empty set in the family."""
        assert build_hyperpair(tropical_void(1)).report.facts["has_empty_set"] is True

    def test_cap_and_group_action(self) -> None:
        """The closure respects its cap and a forced group action needs a group."""
        with pytest.raises(CapExceededError):
            build_hyperpair(all_sum(3), cap=3)
        with pytest.raises(StructureError):
            build_hyperpair(all_sum(3), group_action=True)
        assert tangible_monoid(all_sum(3)) is None
        assert tangible_monoid(sign()) is not None

    def test_powerset_pair(self) -> None:
        """The power set of Krasner lists singletons, then the empty set, then {0,1}."""
        hp = powerset_pair(krasner())
        assert hp.family == (0b01, 0b10, 0b00, 0b11)
        assert hp.zero_family == frozenset({0, 3})
        assert is_intersection_closed(hp)

    def test_lift_relation(self) -> None:
        """Lifting equality gives inclusion on the family."""
        hp = build_hyperpair(krasner())
        lifted = lift_relation(hp, equality(2))
        assert np.array_equal(lifted.rel, hp.subset_relation().rel)
        with pytest.raises(StructureError):
            lift_relation(hp, equality(3))
