"""Pairs ``(A, A0)``, surpassing relations, Property N and the generated submagma.

A pair is a module together with a distinguished subset ``A0`` that plays the
role of zero. Tangible elements are the images ``a.1`` of the non-absorbing
elements of the acting monoid.
"""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from hyperbench.backend.errors import StructureError
from hyperbench.backend.module import TModule
from hyperbench.backend.report import ReportOfViolations, ViolationCollector
from hyperbench.utils.logger import get_logger

logger = get_logger()


@dataclass(frozen=True, eq=False)
class SurpassingRelation:
    """A relation given by a boolean matrix, ``rel[i, j]`` meaning ``i <= j``."""

    rel: np.ndarray = field(repr=False)
    name: str = "custom"

    def __post_init__(self) -> None:
        """Store the matrix as a read-only boolean array."""
        rel = np.array(self.rel, dtype=bool)
        if rel.ndim != 2 or rel.shape[0] != rel.shape[1]:
            logger.error(f"surpassing: expected a square matrix, got {rel.shape}")
            raise StructureError(f"surpassing: expected a square matrix, got {rel.shape}")
        rel.setflags(write=False)
        object.__setattr__(self, "rel", rel)

    @property
    def size(self) -> int:
        """Number of elements the relation is defined on."""
        return int(self.rel.shape[0])

    def leq(self, i: int, j: int) -> bool:
        """Whether ``i <= j``."""
        return bool(self.rel[i, j])

    def is_equality(self) -> bool:
        """Whether the relation is the diagonal."""
        return bool(np.array_equal(self.rel, np.eye(self.size, dtype=bool)))


def equality(n: int) -> SurpassingRelation:
    """The discrete order on ``n`` elements."""
    return SurpassingRelation(np.eye(n, dtype=bool), "equality")


def subset_order(masks: Sequence[int]) -> SurpassingRelation:
    """Inclusion between the subsets encoded by ``masks``."""
    m = np.array(masks, dtype=np.int64)
    return SurpassingRelation((m[:, None] & ~m[None, :]) == 0, "subset")


@dataclass(frozen=True, eq=False)
class Pair:
    """A module with a zero-substitute subset and optional extra structure.

    Attributes:
      module: The underlying module.
      zero_set: The subset ``A0``.
      one: Index of ``1`` in the carrier, required for tangibles and Property N.
      tangibles: Tangible elements; derived from ``one`` when omitted.
      surpassing: Attached surpassing relation; equality when omitted.
      mul: Optional multiplication table on the carrier, ``-1`` where undefined.
    """

    module: TModule
    zero_set: frozenset[int]
    one: int | None = None
    tangibles: frozenset[int] | None = None
    surpassing: SurpassingRelation | None = field(default=None, repr=False)
    mul: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        """Validate indices and derive the tangible set."""
        n = self.module.order
        zero_set = frozenset(int(c) for c in self.zero_set)
        if any(not 0 <= c < n for c in zero_set):
            logger.error(f"pair: zero_set {sorted(zero_set)} is not a subset of the carrier")
            raise StructureError("pair: zero_set is not a subset of the carrier")
        object.__setattr__(self, "zero_set", zero_set)
        if self.one is not None and not 0 <= self.one < n:
            logger.error(f"pair: one index {self.one} out of range")
            raise StructureError(f"pair: one index {self.one} out of range")
        if self.tangibles is None and self.one is not None:
            object.__setattr__(self, "tangibles", frozenset(self.embedding()))
        if self.surpassing is not None and self.surpassing.size != n:
            logger.error(f"pair: relation size {self.surpassing.size} != carrier size {n}")
            raise StructureError("pair: relation shape does not match the carrier")

    @property
    def relation(self) -> SurpassingRelation:
        """The attached relation, or equality."""
        return self.surpassing or equality(self.module.order)

    def embedding(self) -> list[int]:
        """Images ``a.1`` of the non-absorbing monoid elements, in monoid order."""
        if self.one is None:
            logger.error("pair: no unit element fixed")
            raise StructureError("pair: no unit element fixed")
        return [self.module.act(a, self.one) for a in self.module.monoid.non_absorbing()]

    def with_relation(self, rel: SurpassingRelation) -> "Pair":
        """Copy of this pair with another surpassing relation."""
        return Pair(self.module, self.zero_set, self.one, self.tangibles, rel, self.mul)

    def zero_mask(self) -> np.ndarray:
        """Boolean membership vector of ``A0``."""
        mask = np.zeros(self.module.order, dtype=bool)
        mask[list(self.zero_set)] = True
        return mask


@dataclass(frozen=True)
class PropertyNWitness:
    """A pseudo-negative of one with its derived constants.

    Attributes:
      pseudo_neg_one: Tangible index with ``1 + pseudo_neg_one`` in ``A0``.
      e: Index of ``1 + pseudo_neg_one``.
      quasi_zeros: ``{a + a' : a tangible}`` where ``a'`` is ``a`` times the pseudo-negative.
      scalar: Monoid element whose action sends ``1`` to the pseudo-negative.
    """

    pseudo_neg_one: int
    e: int
    quasi_zeros: frozenset[int]
    scalar: int


def check_pair(p: Pair) -> ReportOfViolations:
    """Verify that ``A0`` is a sub-bimagma; report properness and admissibility.

    Args:
      p: The pair to check.

    Returns:
      The violation report. Facts: ``proper``, ``weakly_admissible`` (the
      monoid embeds injectively) and ``admissible`` (the tangibles also span
      the carrier under addition).
    """
    out = ViolationCollector("pair")
    m = p.module
    zs = sorted(p.zero_set)
    inside = p.zero_mask()
    if zs:
        bad = np.argwhere(~inside[m.add[np.ix_(zs, zs)]])
        if len(bad):
            out.add("zero_set_additive", (zs[bad[0][0]], zs[bad[0][1]]), len(bad))
        for axiom, table in (
            ("zero_set_left_action", m.action),
            ("zero_set_right_action", m.ract),
        ):
            bad = np.argwhere(~inside[table[:, zs]])
            if len(bad):
                out.add(axiom, (int(bad[0][0]), zs[bad[0][1]]), len(bad))
    if p.tangibles is not None:
        out.fact("proper", not (p.tangibles & p.zero_set))
    if p.one is not None:
        emb = p.embedding()
        weak = len(set(emb)) == len(emb)
        out.fact("weakly_admissible", weak)
        out.fact("admissible", weak and len(generated_submagma(p).members) == m.order)
    return out.build()


def check_surpassing(p: Pair, s: SurpassingRelation | None = None) -> ReportOfViolations:
    """Exhaustively verify the surpassing-relation axioms on a pair.

    Args:
      p: The pair.
      s: The relation; defaults to the pair's attached relation.

    Returns:
      The violation report. Facts: ``b_leq_b_plus_zero_set`` (the derived
      lemma ``b <= b + c`` for ``c`` in ``A0``) and ``zero_set_upward_closed``.

    Raises:
      StructureError: If the relation size does not match the carrier.
    """
    rel = s or p.relation
    m = p.module
    n = m.order
    if rel.size != n:
        logger.error(f"check_surpassing: relation size {rel.size} != carrier size {n}")
        raise StructureError("check_surpassing: relation shape does not match the carrier")
    r = rel.rel
    out = ViolationCollector("surpassing")
    idx = np.arange(n)
    out.add_mask("reflexive", ~r[idx, idx])
    out.add_mask("transitive", r[:, :, None] & r[None, :, :] & ~r[:, None, :])
    out.add_mask(
        "left_action_monotone",
        r[None, :, :] & ~r[m.action[:, :, None], m.action[:, None, :]],
    )
    out.add_mask(
        "right_action_monotone",
        r[None, :, :] & ~r[m.ract[:, :, None], m.ract[:, None, :]],
    )
    # [i, j, c]: i <= j must give i + c <= j + c
    out.add_mask("sum_monotone", r[:, :, None] & ~r[m.add[:, None, :], m.add[None, :, :]])
    if p.tangibles is not None:
        tang = sorted(p.tangibles)
        for i in tang:
            for j in tang:
                if i != j and r[i, j]:
                    out.add("tangible_rigidity", (i, j))
    out.add_mask("below_zero_is_zero", r[:, m.zero] & (idx != m.zero))
    zs = sorted(p.zero_set)
    for c in zs:
        if not r[m.zero, c]:
            out.add("zero_below_zero_set", (c,))
    lemma = [(b, c) for b in range(n) for c in zs if not r[b, m.add[b, c]]]
    out.fact("b_leq_b_plus_zero_set", not lemma)
    if lemma:
        out.fact("b_leq_b_plus_zero_set_witness", lemma[0])
    inside = p.zero_mask()
    upward = not bool(np.any(r[zs, :] & ~inside[None, :])) if zs else True
    out.fact("zero_set_upward_closed", upward)
    return out.build()


def find_property_N(p: Pair) -> list[PropertyNWitness]:
    """Return every tangible pseudo-negative of one.

    Args:
      p: A weakly admissible pair with ``one`` fixed.

    Returns:
      All witnesses in monoid order; empty when Property N fails.

    Raises:
      StructureError: If the pair has no unit element.
    """
    m = p.module
    if p.one is None:
        logger.error("find_property_N: pair has no unit element")
        raise StructureError("find_property_N: pair has no unit element")
    scalars = m.monoid.non_absorbing()
    found: list[PropertyNWitness] = []
    seen: set[int] = set()
    for s in scalars:
        dag = m.act(s, p.one)
        if dag in seen:
            continue
        seen.add(dag)
        e = m.plus(p.one, dag)
        if e not in p.zero_set:
            continue
        quasi = frozenset(m.plus(m.act(a, p.one), m.act(a, dag)) for a in scalars)
        found.append(PropertyNWitness(dag, e, quasi, s))
    if len(found) > 1:
        logger.info(f"find_property_N: {len(found)} choices of pseudo-negative")
    return found


def circ(p: Pair, w: PropertyNWitness, b: int) -> int:
    """Return ``b.e``: the product when a multiplication is attached, else ``b + b'``.

    Returns ``-1`` when the attached product is undefined.
    """
    if p.mul is not None:
        return int(p.mul[b, w.e])
    m = p.module
    return m.plus(b, m.act(w.scalar, b))


def check_circ_distributive(p: Pair, w: PropertyNWitness) -> ReportOfViolations:
    """Check ``(b1 + b2)e = b1 e + b2 e`` and ``A0``-idempotence.

    Args:
      p: The pair.
      w: A fixed Property N witness.

    Returns:
      The violation report; ``zero_set_idempotent`` is reported as a fact.
    """
    m = p.module
    n = m.order
    out = ViolationCollector("circ_distributive")
    be = np.array([circ(p, w, b) for b in range(n)], dtype=np.int64)
    undefined = 0
    for b1 in range(n):
        for b2 in range(n):
            lhs = be[m.add[b1, b2]]
            if lhs < 0 or be[b1] < 0 or be[b2] < 0:
                undefined += 1
                continue
            if lhs != m.add[be[b1], be[b2]]:
                out.add("circ_distributive", (b1, b2))
    idem = [c for c in sorted(p.zero_set) if m.plus(c, c) != c]
    out.fact("zero_set_idempotent", not idem)
    if idem:
        out.fact("zero_set_idempotent_witness", idem[0])
    out.fact("undefined_products", undefined)
    for a in range(m.monoid.order):
        tang = m.act(a, p.one) if p.one is not None else None
        if tang is not None and a != m.monoid.absorbing:
            q = m.plus(tang, m.act(w.scalar, tang))
            if q not in p.zero_set:
                out.add("quasi_zero_in_zero_set", (tang,))
    return out.build()


@dataclass(frozen=True)
class GeneratedSubmagma:
    """Additive closure of the tangibles with minimal heights.

    Attributes:
      members: Elements reachable as sums of tangibles.
      height: Minimal nesting depth of a sum of tangibles; ``None`` means unreachable.
      report: Action closure and admissibility facts.
    """

    members: frozenset[int]
    height: tuple[int | None, ...]
    report: ReportOfViolations


def generated_submagma(p: Pair, seeds: Iterable[int] | None = None) -> GeneratedSubmagma:
    """Close the tangibles under addition, recording heights.

    Tangibles have height 1. An element has height ``k`` when it is first
    reached as ``b1 + b2`` with both summands of height below ``k``, so
    ``(1 + 1) + (1 + 1)`` has height 3. Zero is treated like any other element.

    Args:
      p: A weakly admissible pair.
      seeds: Alternative generating set; defaults to the tangibles.

    Returns:
      The closure with heights and a report asserting closure under the action.
    """
    m = p.module
    gens = sorted(set(seeds) if seeds is not None else (p.tangibles or ()))
    height: list[int | None] = [None] * m.order
    frontier = []
    for t in gens:
        if height[t] is None:
            height[t] = 1
            frontier.append(t)
    reached = list(frontier)
    level = 1
    while frontier:
        level += 1
        nxt = []
        # [x, y]: x from the previous level, y of any lower height
        for x in frontier:
            for y in reached:
                for s in (m.plus(x, y), m.plus(y, x)):
                    if height[s] is None:
                        height[s] = level
                        nxt.append(s)
        reached.extend(nxt)
        frontier = nxt
    members = frozenset(i for i, h in enumerate(height) if h is not None)
    out = ViolationCollector("generated_submagma")
    for a in range(m.monoid.order):
        for x in sorted(members):
            if m.act(a, x) not in members:
                out.add("action_closed", (a, x))
    out.fact("admissible", len(members) == m.order)
    out.fact("size", len(members))
    return GeneratedSubmagma(members, tuple(height), out.build())


def check_negation_map(p: Pair, neg: Sequence[int] | np.ndarray) -> ReportOfViolations:
    """Verify that ``neg`` is a negation map on the pair.

    A negation map is an additive involution commuting with both actions and
    preserving ``A0``.

    Raises:
      StructureError: If ``neg`` is not a total map on the carrier.
    """
    m = p.module
    table = np.array(neg, dtype=np.int64)
    if table.shape != (m.order,) or np.any((table < 0) | (table >= m.order)):
        logger.error("check_negation_map: negation is not a total map on the carrier")
        raise StructureError("check_negation_map: negation is not a total map on the carrier")
    out = ViolationCollector("negation_map")
    idx = np.arange(m.order)
    out.add_mask("involution", table[table] != idx)
    out.add_mask("additive", table[m.add] != m.add[table[:, None], table[None, :]])
    out.add_mask("commutes_with_action", table[m.action] != m.action[:, table])
    out.add_mask("commutes_with_right_action", table[m.ract] != m.ract[:, table])
    for c in sorted(p.zero_set):
        if int(table[c]) not in p.zero_set:
            out.add("preserves_zero_set", (c,))
    return out.build()


def derived_negation(p: Pair) -> np.ndarray | None:
    """The candidate negation ``b -> (-1).b``, if ``-1`` is the image of a scalar.

    Returns ``None`` when the module has no additive inverse of one or no
    scalar maps one to it.
    """
    m = p.module
    inverse = m.negation()
    if inverse is None or p.one is None:
        return None
    target = int(inverse[p.one])
    for a in range(m.monoid.order):
        if m.act(a, p.one) == target:
            return m.action[a].copy()
    return None
