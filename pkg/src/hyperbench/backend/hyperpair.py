"""Hyperpairs: the sub-pair of the power set generated by the singletons.

The family is closed under elementwise hyperaddition and the tangible action.
Members are ordered singletons first (in carrier order), then by
``(size, mask)``, so the singleton ``{a}`` always has family index ``a``.
"""

from dataclasses import dataclass, field

import numpy as np

from hyperbench.backend.errors import CapExceededError, StructureError
from hyperbench.backend.hyper import Hypermagma, bits, map_mask, mask_label, powerset_add, to_mask
from hyperbench.backend.module import TModule
from hyperbench.backend.monoid import FiniteMonoid, check_monoid, trivial_monoid
from hyperbench.backend.pair import Pair, SurpassingRelation, check_negation_map, subset_order
from hyperbench.backend.report import ReportOfViolations, ViolationCollector
from hyperbench.utils.logger import get_logger

logger = get_logger()

DEFAULT_FAMILY_CAP = 1 << 12
MAX_POWERSET_CARRIER = 8


def _family_order(masks: set[int], n: int) -> list[int]:
    singles = [1 << a for a in range(n)]
    rest = sorted((m for m in masks if m not in singles), key=lambda m: (bin(m).count("1"), m))
    return singles + rest


def tangible_monoid(h: Hypermagma) -> FiniteMonoid | None:
    """``(H, *)`` with ``0`` absorbing when the nonzero elements form a group, else ``None``."""
    if h.mul is None or h.one is None or h.zero is None or h.one == h.zero:
        return None
    t = FiniteMonoid(h.labels, h.mul, identity=h.one, absorbing=h.zero)
    if not check_monoid(t).ok:
        return None
    nonzero = [a for a in range(h.order) if a != h.zero]
    return t if t.is_subgroup(nonzero) else None


@dataclass(frozen=True, eq=False)
class Hyperpair:
    """A closed family of subsets with its induced operations.

    Attributes:
      base: The hypermagma the family lives in.
      family: Member masks in family order.
      zero_family: Family indices of members meeting the seed ``S0``.
      add: Family-indexed addition table.
      monoid: Acting monoid (the multiplicative group with zero, or trivial).
      action: ``|T| x k`` table of ``a.S``.
      right_action: ``|T| x k`` table of ``S.a``.
      one: Family index of the unit singleton, if any.
      seed: The mask ``S0``.
      report: Closure facts, including multiplicative non-closure.
    """

    base: Hypermagma
    family: tuple[int, ...]
    zero_family: frozenset[int]
    add: np.ndarray = field(repr=False)
    monoid: FiniteMonoid = field(repr=False)
    action: np.ndarray = field(repr=False)
    right_action: np.ndarray = field(repr=False)
    one: int | None
    seed: int
    report: ReportOfViolations = field(repr=False)

    @property
    def order(self) -> int:
        """Number of family members."""
        return len(self.family)

    @property
    def labels(self) -> tuple[str, ...]:
        """Members rendered as ``{a,b}``."""
        return tuple(mask_label(self.base.labels, s) for s in self.family)

    def index_of(self, mask: int) -> int:
        """Family index of ``mask``.

        Raises:
          StructureError: If the subset is not a member.
        """
        try:
            return self.family.index(int(mask))
        except ValueError:
            label = mask_label(self.base.labels, mask)
            logger.error(f"hyperpair: {label} is not in the family")
            raise StructureError(f"hyperpair: {label} is not in the family")

    def subset_relation(self) -> SurpassingRelation:
        """Inclusion on the family."""
        return subset_order(self.family)

    def to_module(self) -> TModule:
        """The family as a module over the tangible monoid, zero ``{0}``."""
        zero = self.index_of(1 << (self.base.zero or 0))
        return TModule(
            self.labels, self.add, zero, self.monoid, self.action, self.monoid, self.right_action,
        )

    def mul_table(self) -> np.ndarray | None:
        """Elementwise products on the family, ``-1`` where they leave it."""
        h = self.base
        if h.mul is None:
            return None
        where = {s: i for i, s in enumerate(self.family)}
        k = self.order
        table = np.full((k, k), -1, dtype=np.int64)
        for i, s1 in enumerate(self.family):
            for j, s2 in enumerate(self.family):
                table[i, j] = where.get(h.product(s1, s2), -1)
        return table

    def to_pair(self) -> Pair:
        """The hyperpair as a :class:`Pair` with ``A0`` the zero family and ``⊆`` attached."""
        return Pair(
            self.to_module(),
            self.zero_family,
            one=self.one,
            surpassing=self.subset_relation(),
            mul=self.mul_table(),
        )


def _assemble(
    h: Hypermagma,
    masks: list[int],
    t: FiniteMonoid,
    grouped: bool,
    seed: int,
    one: int | None,
    facts: dict[str, object],
) -> Hyperpair:
    where = {s: i for i, s in enumerate(masks)}
    k = len(masks)
    add = np.empty((k, k), dtype=np.int64)
    for i, s1 in enumerate(masks):
        for j, s2 in enumerate(masks):
            add[i, j] = where[powerset_add(h, s1, s2)]
    if grouped:
        action = np.array([[where[h.scale(a, s)] for s in masks] for a in range(t.order)])
        right = np.array([[where[h.product(s, 1 << a)] for s in masks] for a in range(t.order)])
    else:
        action = np.tile(np.arange(k), (t.order, 1))
        right = action
    out = ViolationCollector("hyperpair")
    for key, value in facts.items():
        out.fact(key, value)
    out.fact("size", k)
    out.fact("has_empty_set", 0 in where)
    if h.mul is not None:
        outside = [
            (i, j)
            for i, s1 in enumerate(masks)
            for j, s2 in enumerate(masks)
            if h.product(s1, s2) not in where
        ]
        out.fact("mul_closed", not outside)
        if outside:
            out.fact("mul_closed_witness", outside[0])
            out.fact("mul_outside_count", len(outside))
    zero_family = frozenset(i for i, s in enumerate(masks) if s & seed)
    return Hyperpair(h, tuple(masks), zero_family, add, t, action, right, one, seed, out.build())


def build_hyperpair(
    h: Hypermagma,
    seed: int | None = None,
    cap: int = DEFAULT_FAMILY_CAP,
    group_action: bool | None = None,
) -> Hyperpair:
    """Close the singletons under hyperaddition and the tangible action.

    Args:
      h: A hypermagma with a hyperzero.
      seed: Mask ``S0``; members meeting it form the zero family. Defaults to ``{0}``.
      cap: Largest family size allowed.
      group_action: Force (``True``) or forbid (``False``) acting by the
        multiplicative group; by default it is used whenever it exists.

    Returns:
      The hyperpair.

    Raises:
      StructureError: If ``h`` has no hyperzero, or a group action is forced
        but the nonzero elements are not a multiplicative group.
      CapExceededError: If the closure grows beyond ``cap``.
    """
    if h.zero is None:
        logger.error("build_hyperpair: the hypermagma has no hyperzero")
        raise StructureError("build_hyperpair: the hypermagma has no hyperzero")
    n = h.order
    group = tangible_monoid(h)
    if group_action and group is None:
        logger.error("build_hyperpair: nonzero elements are not a multiplicative group")
        raise StructureError("build_hyperpair: nonzero elements are not a multiplicative group")
    grouped = group is not None and group_action is not False
    t = group if grouped and group is not None else trivial_monoid()
    if h.one is not None:
        one_elem: int | None = h.one
    else:
        one_elem = next((a for a in range(n) if a != h.zero), None)

    members = [1 << a for a in range(n)]
    seen = set(members)
    i = 0
    while i < len(members):
        s = members[i]
        fresh = []
        for other in members[: i + 1]:
            fresh.append(powerset_add(h, s, other))
            fresh.append(powerset_add(h, other, s))
        if grouped:
            for a in range(n):
                fresh.append(h.scale(a, s))
                fresh.append(h.product(s, 1 << a))
        for x in fresh:
            if x not in seen:
                seen.add(x)
                members.append(x)
                if len(members) > cap:
                    logger.error(f"build_hyperpair: family exceeds cap {cap}")
                    raise CapExceededError(cap, len(members), "hyperpair closure")
        i += 1
    masks = _family_order(seen, n)
    s0 = (1 << h.zero) if seed is None else int(seed)
    hp = _assemble(h, masks, t, grouped, s0, one_elem, {"group_action": grouped})
    logger.info(f"hyperpair: {hp.order} members, {len(hp.zero_family)} in the zero family")
    return hp


def powerset_pair(h: Hypermagma) -> Hyperpair:
    """Every subset of ``H``, with the empty set absorbing.

    Raises:
      StructureError: If ``h`` has no hyperzero or is too large.
    """
    if h.zero is None:
        logger.error("powerset_pair: the hypermagma has no hyperzero")
        raise StructureError("powerset_pair: the hypermagma has no hyperzero")
    if h.order > MAX_POWERSET_CARRIER:
        logger.error(f"powerset_pair: carrier of {h.order} exceeds {MAX_POWERSET_CARRIER}")
        raise StructureError(f"powerset_pair: carrier of {h.order} exceeds {MAX_POWERSET_CARRIER}")
    group = tangible_monoid(h)
    t = group if group is not None else trivial_monoid()
    masks = _family_order(set(range(1 << h.order)), h.order)
    one = h.one if h.one is not None else (1 if h.order > 1 else None)
    return _assemble(h, masks, t, group is not None, 1 << h.zero, one, {"powerset": True})


def is_intersection_closed(hp: Hyperpair) -> bool:
    """Whether the family is closed under pairwise (hence arbitrary) intersection."""
    members = set(hp.family)
    return all(a & b in members for a in hp.family for b in hp.family)


def lift_relation(hp: Hyperpair, rel: SurpassingRelation) -> SurpassingRelation:
    """Lift ``<=`` on ``H`` to the family: ``S1 <= S2`` iff each ``s1`` has some ``s2 >= s1``.

    Raises:
      StructureError: If ``rel`` is not a relation on the base carrier.
    """
    if rel.size != hp.base.order:
        logger.error("lift_relation: relation does not match the carrier")
        raise StructureError("lift_relation: relation does not match the carrier")
    members = [bits(s) for s in hp.family]
    k = hp.order
    out = np.zeros((k, k), dtype=bool)
    for i, s1 in enumerate(members):
        for j, s2 in enumerate(members):
            out[i, j] = all(any(rel.leq(x, y) for y in s2) for x in s1)
    return SurpassingRelation(out, f"lifted:{rel.name}")


def negation_on_family(hp: Hyperpair, neg: np.ndarray) -> tuple[np.ndarray, ReportOfViolations]:
    """Apply a hypernegation elementwise to the family and check it is a negation map.

    Args:
      hp: The hyperpair.
      neg: Negation table on the base carrier, e.g. from ``negation_table``.

    Returns:
      The family-indexed table and the ``check_negation_map`` report.

    Raises:
      StructureError: If some image leaves the family.
    """
    table = np.array([hp.index_of(map_mask(neg, s)) for s in hp.family], dtype=np.int64)
    return table, check_negation_map(hp.to_pair(), table)


def singleton_embedding(hp: Hyperpair) -> np.ndarray:
    """The map ``a -> {a}`` into family indices."""
    return np.array([hp.index_of(to_mask([a])) for a in range(hp.base.order)], dtype=np.int64)
