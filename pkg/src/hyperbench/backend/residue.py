"""Residue hypermodules ``M/G`` and quotient hyperfields.

The classes of ``M/G`` are the orbits ``bG`` of a subgroup ``G`` of the
acting monoid. The hyperaddition is ``b1G + b2G = {cG : c in b1G + b2G}``;
when ``M`` is the regular module of a field, coset multiplication turns the
residue into a quotient hyperfield.
"""

import itertools
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from hyperbench.backend.errors import StructureError
from hyperbench.backend.hyper import Hypermagma, bits, powerset_add, to_mask
from hyperbench.backend.module import TModule, is_free_base
from hyperbench.backend.monoid import FiniteMonoid
from hyperbench.backend.pair import SurpassingRelation
from hyperbench.backend.report import ReportOfViolations, ViolationCollector
from hyperbench.utils.logger import get_logger

logger = get_logger()


@dataclass(frozen=True)
class SubgroupSpec:
    """A subgroup ``G`` of the acting monoid.

    Attributes:
      parent: The monoid ``T``.
      members: Indices of ``G`` in ``T``.
    """

    parent: FiniteMonoid
    members: frozenset[int]

    def __post_init__(self) -> None:
        """Check that ``members`` is a group containing the identity."""
        members = frozenset(int(a) for a in self.members)
        object.__setattr__(self, "members", members)
        if not self.parent.is_subgroup(sorted(members)):
            labels = [self.parent.labels[a] for a in sorted(members) if 0 <= a < self.parent.order]
            logger.error(f"subgroup: {labels} is not a subgroup of T")
            raise StructureError(f"subgroup: {labels} is not a subgroup of T")


def subgroup_from_labels(t: FiniteMonoid, labels: Sequence[str]) -> SubgroupSpec:
    """Build a :class:`SubgroupSpec` from element labels."""
    return SubgroupSpec(t, frozenset(t.index(x) for x in labels))


@dataclass(frozen=True, eq=False)
class ResidueHypermodule:
    """The coset hypermagma of a module.

    Attributes:
      parent: The module ``M``.
      group: The subgroup ``G``.
      classes: Orbits ``bG``, ordered by least member.
      projection: Carrier index to class index.
      hypermagma: The induced hyperaddition (and coset product, if any).
      action: ``|T| x |classes|`` table of ``a.(bG) = (ab)G``.
      report: Well-definedness facts.
    """

    parent: TModule
    group: SubgroupSpec
    classes: tuple[tuple[int, ...], ...]
    projection: np.ndarray = field(repr=False)
    hypermagma: Hypermagma = field(repr=False)
    action: np.ndarray = field(repr=False)
    report: ReportOfViolations = field(repr=False)

    @property
    def order(self) -> int:
        """Number of classes."""
        return len(self.classes)

    def class_of(self, b: int) -> int:
        """Class index of a carrier element."""
        return int(self.projection[b])


def _orbits(m: TModule, members: list[int]) -> tuple[list[tuple[int, ...]], np.ndarray]:
    projection = np.full(m.order, -1, dtype=np.int64)
    classes: list[tuple[int, ...]] = []
    for b in range(m.order):
        if projection[b] >= 0:
            continue
        orbit = tuple(sorted({m.act(g, b) for g in members}))
        for c in orbit:
            projection[c] = len(classes)
        classes.append(orbit)
    return classes, projection


def residue(m: TModule, g: SubgroupSpec) -> ResidueHypermodule:
    """Build ``M/G``.

    Args:
      m: A module over ``g.parent``.
      g: A subgroup with ``bG = Gb`` for every ``b``.

    Returns:
      The residue hypermodule; it carries a multiplication when ``M`` is
      regular and coset products are well defined.

    Raises:
      StructureError: If ``G`` acts on another monoid or is not normal, with
        the first offending element in the message.
    """
    if not m.same_monoid(g.parent):
        logger.error("residue: subgroup is taken in a different monoid")
        raise StructureError("residue: subgroup is taken in a different monoid")
    members = sorted(g.members)
    for b in range(m.order):
        left = {m.act(a, b) for a in members}
        right = {int(m.ract[a, b]) for a in members}
        if left != right:
            logger.error(f"residue: G is not normal, bG != Gb for b = {m.labels[b]}")
            raise StructureError(f"residue: G is not normal, bG != Gb for b = {m.labels[b]}")
    classes, projection = _orbits(m, members)
    k = len(classes)
    add = np.zeros((k, k), dtype=np.int64)
    for i, ci in enumerate(classes):
        for j, cj in enumerate(classes):
            add[i, j] = to_mask(int(projection[m.add[x, y]]) for x in ci for y in cj)
    out = ViolationCollector("residue")
    reps = [c[0] for c in classes]
    action = np.array(
        [[projection[m.act(a, r)] for r in reps] for a in range(m.monoid.order)],
        dtype=np.int64,
    )
    for a in range(m.monoid.order):
        for i, ci in enumerate(classes):
            if any(projection[m.act(a, x)] != action[a, i] for x in ci):
                out.add("action_well_defined", (a, i))
    mul = None
    one = None
    if m.is_regular():
        t = m.monoid
        prod = np.array([[projection[t.mul(x, y)] for y in reps] for x in reps], dtype=np.int64)
        clash = [
            (i, j)
            for i, ci in enumerate(classes)
            for j, cj in enumerate(classes)
            if any(projection[t.mul(x, y)] != prod[i, j] for x in ci for y in cj)
        ]
        out.fact("mul_well_defined", not clash)
        if not clash:
            mul = prod
            one = int(projection[t.identity])
    labels = tuple(m.labels[r] for r in reps)
    h = Hypermagma(labels, add, int(projection[m.zero]), mul, one)
    out.fact("classes", k)
    logger.info(f"residue: {m.order} elements in {k} classes of |G| = {len(members)}")
    return ResidueHypermodule(m, g, tuple(classes), projection, h, action, out.build())


@dataclass(frozen=True)
class ResidueConstants:
    """``e = 1 + (-1)`` on cosets with the products it takes part in.

    All subsets are class masks.
    """

    e: int
    ee: int
    e_plus_e: int
    scaled: tuple[int, ...]

    @property
    def holds(self) -> bool:
        """Whether ``ee = e + e``."""
        return self.ee == self.e_plus_e


def residue_constants(r: ResidueHypermodule, one: int | None = None) -> ResidueConstants:
    """Compute ``e``, ``ee``, ``e + e`` and ``S.e`` for every class ``S``.

    Args:
      r: A residue with a coset multiplication.
      one: Carrier index of ``1`` in ``M``; defaults to the identity of ``T``
        for regular modules.

    Raises:
      StructureError: If ``M`` has no additive inverse of one or the residue
        has no multiplication.
    """
    m = r.parent
    h = r.hypermagma
    if h.mul is None:
        logger.error("residue_constants: residue has no coset multiplication")
        raise StructureError("residue_constants: residue has no coset multiplication")
    if one is None:
        one = m.monoid.identity
    neg = m.negation()
    if neg is None:
        logger.error("residue_constants: no hypernegative, M has no additive inverses")
        raise StructureError("residue_constants: no hypernegative, M has no additive inverses")
    e = int(h.add[r.class_of(one), r.class_of(int(neg[one]))])
    scaled = tuple(h.product(1 << c, e) for c in range(r.order))
    consts = ResidueConstants(e, h.product(e, e), powerset_add(h, e, e), scaled)
    logger.debug(f"residue_constants: e = {bits(e)}, ee = e+e is {consts.holds}")
    return consts


def induced_surpassing(
    r: ResidueHypermodule, s: SurpassingRelation,
) -> tuple[SurpassingRelation, ReportOfViolations]:
    """``b1G <= b2G`` iff for each ``g`` in ``G`` some ``g'`` has ``b1 g <= b2 g'``.

    Args:
      r: The residue.
      s: A surpassing relation on the parent carrier.

    Returns:
      The class relation and a report on reflexivity, transitivity, action
      monotonicity, additivity and ``b <= 0 => b = 0``. Additivity reads the
      hypersums one-sidedly: each member of the smaller sum lies below some
      member of the larger one.

    Raises:
      StructureError: If ``s`` is not a relation on the parent carrier.
    """
    m = r.parent
    if s.size != m.order:
        logger.error("induced_surpassing: relation does not match the carrier")
        raise StructureError("induced_surpassing: relation does not match the carrier")
    members = sorted(r.group.members)
    reps = [c[0] for c in r.classes]
    k = r.order
    rel = np.zeros((k, k), dtype=bool)
    for i, b1 in enumerate(reps):
        for j, b2 in enumerate(reps):
            rel[i, j] = all(
                any(s.leq(int(m.ract[g, b1]), int(m.ract[g2, b2])) for g2 in members)
                for g in members
            )
    out = ViolationCollector("induced_surpassing")
    idx = np.arange(k)
    out.add_mask("reflexive", ~rel[idx, idx])
    out.add_mask("transitive", rel[:, :, None] & rel[None, :, :] & ~rel[:, None, :])
    act = r.action
    out.add_mask("action_monotone", rel[None, :, :] & ~rel[act[:, :, None], act[:, None, :]])
    h = r.hypermagma
    for x1, y1, x2, y2 in itertools.product(range(k), repeat=4):
        if rel[x1, y1] and rel[x2, y2]:
            small = bits(int(h.add[x1, x2]))
            large = bits(int(h.add[y1, y2]))
            if not all(any(rel[z, w] for w in large) for z in small):
                out.add("additive", (x1, y1, x2, y2))
    z = r.class_of(m.zero)
    out.add_mask("below_zero_is_zero", rel[:, z] & (idx != z))
    return SurpassingRelation(rel, f"residue:{s.name}"), out.build()


def quotient_monoid(t: FiniteMonoid, g: SubgroupSpec) -> tuple[FiniteMonoid, np.ndarray]:
    """``T/G`` on the cosets ``aG`` with the induced product.

    Returns:
      The coset monoid and the projection ``T -> T/G``.

    Raises:
      StructureError: If the coset product is not well defined.
    """
    members = sorted(g.members)
    projection = np.full(t.order, -1, dtype=np.int64)
    reps: list[int] = []
    cosets: list[list[int]] = []
    for a in range(t.order):
        if projection[a] >= 0:
            continue
        coset = sorted({t.mul(a, x) for x in members})
        for c in coset:
            projection[c] = len(reps)
        reps.append(a)
        cosets.append(coset)
    op = np.array([[projection[t.mul(x, y)] for y in reps] for x in reps], dtype=np.int64)
    for i, ci in enumerate(cosets):
        for j, cj in enumerate(cosets):
            if any(projection[t.mul(x, y)] != op[i, j] for x in ci for y in cj):
                logger.error("quotient_monoid: coset product is not well defined")
                raise StructureError("quotient_monoid: coset product is not well defined")
    absorbing = None if t.absorbing is None else int(projection[t.absorbing])
    labels = tuple(t.labels[a] for a in reps)
    return FiniteMonoid(labels, op, int(projection[t.identity]), absorbing), projection


@dataclass(frozen=True)
class ResidueBase:
    """Classes of a free base and the coordinate count of every class.

    Attributes:
      base: Class indices ``b_i G``.
      expansions: For each class, how many coefficient tuples over ``T/G``
        have it in their hypersum.
      report: ``unique_coordinates`` violations.
    """

    base: tuple[int, ...]
    expansions: tuple[int, ...]
    report: ReportOfViolations


def residue_free_base(m: TModule, base: Sequence[int], g: SubgroupSpec) -> ResidueBase:
    """Transfer a free base of ``M`` to ``M/G`` and verify unique coordinates.

    Args:
      m: A module that is free over ``T`` with base ``base``.
      base: Carrier indices of the base.
      g: The subgroup.

    Returns:
      The residue base with exhaustive coordinate counts.

    Raises:
      StructureError: If ``base`` is not free, or its classes are not distinct
        nonzero rays.
    """
    if not is_free_base(m, base):
        logger.error("residue_free_base: base is not free")
        raise StructureError("residue_free_base: base is not free")
    r = residue(m, g)
    classes = [r.class_of(b) for b in base]
    zero = r.class_of(m.zero)
    if len(set(classes)) != len(classes) or zero in classes:
        logger.error("residue_free_base: base is not G-invariant as a set of rays")
        raise StructureError("residue_free_base: base is not G-invariant as a set of rays")
    tg, t_proj = quotient_monoid(m.monoid, g)
    reps = [int(np.flatnonzero(t_proj == c)[0]) for c in range(tg.order)]
    counts = [0] * r.order
    h = r.hypermagma
    for coeffs in itertools.product(range(tg.order), repeat=len(base)):
        total = 1 << zero
        for c, b in zip(coeffs, base, strict=True):
            total = powerset_add(h, total, 1 << r.class_of(m.act(reps[c], b)))
        for x in bits(total):
            counts[x] += 1
    out = ViolationCollector("residue_free_base")
    for x, n in enumerate(counts):
        if n != 1:
            out.add("unique_coordinates", (x,), 1)
    out.fact("rank", len(base))
    out.fact("classes", r.order)
    return ResidueBase(tuple(classes), tuple(counts), out.build())
